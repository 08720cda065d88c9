#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nearpal/engine_onepass.hpp"
#include "nearpal/fingerprint.hpp"

namespace nearpal {

using Bytes = std::vector<std::uint8_t>;

Bytes to_bytes(const std::string& s);
std::string to_string(const Bytes& b);

struct HamResult {
  u64 ham = 0;
  std::vector<u64> mismatches;  // absolute 1-based
};

// HAM(S[x,y], reverse) with optional pairing f: i mismatches when S[i] != f(S[x+y-i]).
HamResult exact_ham_reverse(const Bytes& s, u64 x, u64 y, const SymbolMap* pairing = nullptr);

inline constexpr u64 kBruteLimit = 8192;

// Longest d-near-palindrome by center expansion; smallest start among ties.
// Throws ConfigError above the size limit.
PalindromeAnswer brute_longest(const Bytes& s, u64 d, const SymbolMap* pairing = nullptr,
                               u64 limit = kBruteLimit);

// Independent O(n^3) check of every substring.
PalindromeAnswer brute_longest_cubic(const Bytes& s, u64 d, const SymbolMap* pairing = nullptr);

// Prefix of 1 0 11 00 111 000 ... over the symbols '1' and '0'.
Bytes gen_nu(u64 length);

enum class HardKind { multiplicative, additive };

struct HardInstanceSpec {
  HardKind kind = HardKind::multiplicative;
  u64 n = 0;       // total length (multiplicative), or n' (additive)
  u64 d = 1;
  u64 E = 0;       // additive only
  u64 target_ham = 1;  // d or d+1
  u64 seed = 1;
};

// ν^R x y^R ν with x of length n/4 carrying d ones and HAM(x, y) = target.
Bytes gen_mult_hard(const HardInstanceSpec& spec);

// 1^E x1 1^{E/d} x2 ... x_{n'/2} y_{n'/2} ... 1^{E/d} y1 1^E.
Bytes gen_add_hard(const HardInstanceSpec& spec);

// Checks an answer against the raw string: HAM within d and exact mismatch set.
bool verify_answer(const Bytes& s, const PalindromeAnswer& ans, const SymbolMap* pairing = nullptr);

// Uniform random string over the first `alphabet` symbols of `letters`
// (or bytes 0..alphabet-1 when letters is empty).
Bytes random_string(u64 n, unsigned alphabet, std::mt19937_64& rng, const std::string& letters = "");

// Overwrites s[start .. start+len-1] with a near-palindrome holding `pairs`
// mismatched mirror pairs (palindromic under the pairing when given).
void plant_near_palindrome(Bytes& s, u64 start, u64 len, u64 pairs, std::mt19937_64& rng,
                           const SymbolMap* pairing = nullptr);

}  // namespace nearpal
