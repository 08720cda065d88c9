#include "nearpal/modarith.hpp"

#include <algorithm>
#include <stdexcept>

#include "nearpal/errors.hpp"

namespace nearpal {

PrimeRange make_range(u64 lo, u64 hi) {
  PrimeRange r;
  r.lo = std::max<u64>(lo, 2);
  r.hi = std::max(hi, r.lo);
  return r;
}

u64 mod_pow(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(u64 m) {
  if (m < 2) return false;
  static constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : small) {
    if (m % p == 0) return m == p;
  }
  u64 d = m - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are a complete witness set below 2^64.
  for (u64 a : small) {
    u64 x = mod_pow(a, d, m);
    if (x == 1 || x == m - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, m);
      if (x == m - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<u64> primes_in_range(PrimeRange range) {
  std::vector<u64> out;
  if (range.hi < range.lo || range.hi < 2) return out;
  u64 lo = std::max<u64>(range.lo, 2);
  // Segmented sieve for moderate spans, Miller-Rabin otherwise.
  if (range.hi - lo > (u64{1} << 26) || range.hi > (u64{1} << 40)) {
    for (u64 v = lo; v <= range.hi && v >= lo; ++v)
      if (is_prime(v)) out.push_back(v);
    return out;
  }
  u64 root = 1;
  while ((root + 1) * (root + 1) <= range.hi) ++root;
  std::vector<bool> small_comp(root + 1, false);
  std::vector<bool> comp(range.hi - lo + 1, false);
  for (u64 p = 2; p <= root; ++p) {
    if (small_comp[p]) continue;
    for (u64 k = p * p; k <= root; k += p) small_comp[k] = true;
    u64 start = std::max(p * p, (lo + p - 1) / p * p);
    for (u64 k = start; k <= range.hi; k += p) comp[k - lo] = true;
  }
  for (u64 v = lo; v <= range.hi; ++v)
    if (!comp[v - lo]) out.push_back(v);
  return out;
}

int widen_range(PrimeRange& range, std::size_t min_primes) {
  int doublings = 0;
  while (true) {
    std::size_t count = 0;
    if (range.hi - range.lo > (u64{1} << 20)) {
      // Wide enough that prime density settles it without a full sieve.
      PrimeRange head{range.lo, range.lo + (u64{1} << 20)};
      count = primes_in_range(head).size();
    } else {
      count = primes_in_range(range).size();
    }
    if (count >= min_primes) return doublings;
    range.hi = std::max<u64>(range.hi * 2, range.lo + 2);
    ++doublings;
  }
}

u64 sample_prime(PrimeRange range, std::mt19937_64& rng) {
  if (range.lo > range.hi) throw ConfigError("prime range is empty");
  // rejection keeps the draw uniform over primes; enumerate only when it stalls
  if (range.hi - range.lo > 4096) {
    std::uniform_int_distribution<u64> draw(range.lo, range.hi);
    for (int attempt = 0; attempt < 4096; ++attempt) {
      u64 v = draw(rng);
      if (is_prime(v)) return v;
    }
  }
  auto ps = primes_in_range(range);
  if (ps.empty()) throw ConfigError("prime range contains no prime");
  std::uniform_int_distribution<std::size_t> pick(0, ps.size() - 1);
  return ps[pick(rng)];
}

u64 mod_inv(u64 a, u64 m) {
  a %= m;
  if (a == 0) throw std::domain_error("mod_inv of zero");
  // extended Euclid on signed 128-bit values
  __int128 t = 0, new_t = 1, r = m, new_r = a;
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw std::domain_error("mod_inv of non-unit");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

namespace {
u64 gcd(u64 a, u64 b) {
  while (b) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}
}  // namespace

u64 crt_combine(const std::vector<std::pair<u64, u64>>& residues) {
  u64 x = 0;
  u64 mod = 1;
  for (auto [res, m] : residues) {
    if (m == 0) throw std::invalid_argument("crt: zero modulus");
    if (gcd(mod, m) != 1) throw std::invalid_argument("crt: moduli not coprime");
    if (static_cast<u128>(mod) * m > static_cast<u128>(~u64{0}))
      throw std::invalid_argument("crt: modulus product overflows");
    res %= m;
    // x + mod * t == res (mod m)
    u64 diff = sub_mod(res, x % m, m);
    u64 t = m == 1 ? 0 : mul_mod(diff, mod_inv(mod % m, m), m);
    x = x + mod * t;
    mod *= m;
  }
  return x;
}

}  // namespace nearpal
