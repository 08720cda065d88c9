#include <random>

#include "doctest.h"
#include "nearpal/errors.hpp"
#include "nearpal/oracle.hpp"

using namespace nearpal;

TEST_CASE("exact_ham_reverse") {
  auto s = to_bytes("abca");
  CHECK(exact_ham_reverse(s, 2, 2).ham == 0);
  auto h = exact_ham_reverse(s, 1, 4);
  CHECK(h.ham == 2);
  CHECK(h.mismatches == std::vector<u64>{2, 3});
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    Bytes r = random_string(40, 3, rng, "xyz");
    u64 a = 1 + rng() % 40, b = a + rng() % (41 - a);
    if ((b - a + 1) % 2 == 0) CHECK(exact_ham_reverse(r, a, b).ham % 2 == 0);
  }
}

TEST_CASE("brute_longest basics") {
  CHECK(brute_longest(to_bytes("racecar"), 0).length == 7);
  CHECK(brute_longest(to_bytes("abcdefg"), 0).length == 1);
  auto a = brute_longest(to_bytes("abcdefg"), 0);
  CHECK(a.start == 1);
  CHECK(brute_longest(to_bytes("abcba"), 3).length == 5);
  CHECK(brute_longest({}, 0).length == 0);
  CHECK_THROWS_AS(brute_longest(Bytes(9000, 'a'), 0), ConfigError);
}

TEST_CASE("brute_longest agrees with the cubic checker") {
  std::mt19937_64 rng(2024);
  auto dna = dna_complement_map();
  for (int t = 0; t < 500; ++t) {
    const u64 n = 1 + rng() % 256;
    const unsigned sigma = 2 + t % 3;
    Bytes s = random_string(n, sigma, rng, "ACGT");
    const u64 d = rng() % 5;
    const SymbolMap* f = t % 5 == 0 ? &dna : nullptr;
    if (n > 96 && t % 4) continue;  // keep the cubic side cheap
    auto fast = brute_longest(s, d, f);
    auto slow = brute_longest_cubic(s, d, f);
    CHECK(fast.length == slow.length);
    CHECK(fast.start == slow.start);
    CHECK(fast.mismatches == slow.mismatches);
  }
}

TEST_CASE("gen_nu") {
  CHECK(to_string(gen_nu(6)) == "101100");
  CHECK(gen_nu(0).empty());
  CHECK(to_string(gen_nu(10)) == "1011001110");
}

TEST_CASE("multiplicative hard instances") {
  for (u64 seed = 1; seed <= 3; ++seed) {
    HardInstanceSpec yes{HardKind::multiplicative, 1024, 2, 0, 2, seed};
    HardInstanceSpec no = yes;
    no.target_ham = 3;
    Bytes a = gen_mult_hard(yes), b = gen_mult_hard(no);
    CHECK(a.size() == 1024);
    CHECK(a == gen_mult_hard(yes));
    // both sides of the middle mismatch, so the string HAM is twice HAM(x, y)
    CHECK(exact_ham_reverse(a, 1, 1024).ham == 4);
    CHECK(brute_longest(a, 4).length == 1024);
    CHECK(brute_longest(b, 4).length <= 200 * 4 + 512);
  }
  CHECK_THROWS_AS(gen_mult_hard({HardKind::multiplicative, 1024, 5, 0, 5, 1}), ConfigError);
}

TEST_CASE("additive hard instances") {
  HardInstanceSpec yes{HardKind::additive, 256, 2, 8, 2, 5};
  Bytes a = gen_add_hard(yes);
  const u64 full = 2 * 8 + 256 + (8 / 2) * (256 - 2);
  CHECK(a.size() == full);
  CHECK(brute_longest(a, 4).length == full);
  HardInstanceSpec no = yes;
  no.target_ham = 3;
  Bytes b = gen_add_hard(no);
  CHECK(brute_longest(b, 4).length <= (8 / 2 + 1) * (256 - 2));
  HardInstanceSpec small_e = yes;
  small_e.E = 2;
  CHECK_THROWS_AS(gen_add_hard(small_e), ConfigError);
}

TEST_CASE("verify_answer") {
  auto s = to_bytes("xxabcaxx");
  PalindromeAnswer ans;
  ans.d = 2;
  ans.start = 3;
  ans.length = 4;
  ans.mismatches = {4, 5};
  CHECK(verify_answer(s, ans));
  ans.length += 2;
  CHECK_FALSE(verify_answer(s, ans));
  PalindromeAnswer empty;
  CHECK(verify_answer({}, empty));
}
