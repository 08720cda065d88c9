#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace nearpal {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct PrimeRange {
  u64 lo = 2;
  u64 hi = 2;
};

// Clamps lo to >= 2 and hi to >= lo.
PrimeRange make_range(u64 lo, u64 hi);

// Doubles hi until the range holds at least min_primes primes.
// Returns the number of doublings performed.
int widen_range(PrimeRange& range, std::size_t min_primes);

bool is_prime(u64 m);

std::vector<u64> primes_in_range(PrimeRange range);

// Uniform over the primes of the range; throws ConfigError if there are none.
u64 sample_prime(PrimeRange range, std::mt19937_64& rng);

inline u64 add_mod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return (s >= m || s < a) ? s - m : s;
}
inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }
inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 mod_pow(u64 base, u64 exp, u64 m);

// Throws std::domain_error when a is 0 mod m.
u64 mod_inv(u64 a, u64 m);

// Unique x in [0, prod moduli). Throws std::invalid_argument on non-coprime
// moduli or when the product does not fit in 64 bits.
u64 crt_combine(const std::vector<std::pair<u64, u64>>& residues);

}  // namespace nearpal
