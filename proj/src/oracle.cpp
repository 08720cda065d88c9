#include "nearpal/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "nearpal/errors.hpp"

namespace nearpal {

Bytes to_bytes(const std::string& s) { return Bytes(s.begin(), s.end()); }
std::string to_string(const Bytes& b) { return std::string(b.begin(), b.end()); }

namespace {
const SymbolMap& pairing_or_identity(const SymbolMap* pairing) {
  static const SymbolMap id = identity_map();
  return pairing ? *pairing : id;
}
}  // namespace

HamResult exact_ham_reverse(const Bytes& s, u64 x, u64 y, const SymbolMap* pairing) {
  const SymbolMap& f = pairing_or_identity(pairing);
  HamResult out;
  if (x < 1 || y > s.size() || x > y) return out;
  for (u64 i = x; i <= y; ++i)
    if (s[i - 1] != f[s[x + y - i - 1]]) out.mismatches.push_back(i);
  out.ham = out.mismatches.size();
  return out;
}

PalindromeAnswer brute_longest(const Bytes& s, u64 d, const SymbolMap* pairing, u64 limit) {
  if (s.size() > limit) throw ConfigError("brute_longest: input exceeds the size limit");
  const SymbolMap& f = pairing_or_identity(pairing);
  const u64 n = s.size();
  PalindromeAnswer best;
  best.d = d;
  auto take = [&](u64 lo, u64 hi) {
    const u64 len = hi - lo + 1;
    if (len > best.length || (len == best.length && lo < best.start)) {
      best.length = len;
      best.start = lo;
    }
  };
  for (u64 center = 1; center <= n; ++center) {
    for (int parity = 0; parity < 2; ++parity) {
      u64 lo, hi, count;
      if (parity == 0) {
        lo = hi = center;
        count = s[center - 1] != f[s[center - 1]] ? 1 : 0;
        if (count > d) continue;
        take(lo, hi);
      } else {
        if (center == n) continue;
        lo = center + 1;  // empty, grows to [center, center+1]
        hi = center;
        count = 0;
      }
      while (lo > 1 && hi < n) {
        const u64 add = s[lo - 2] != f[s[hi]] ? 2 : 0;
        if (count + add > d) break;
        count += add;
        --lo;
        ++hi;
        take(lo, hi);
      }
    }
  }
  if (best.length) best.mismatches = exact_ham_reverse(s, best.start, best.start + best.length - 1, pairing).mismatches;
  return best;
}

PalindromeAnswer brute_longest_cubic(const Bytes& s, u64 d, const SymbolMap* pairing) {
  PalindromeAnswer best;
  best.d = d;
  const u64 n = s.size();
  for (u64 len = n; len >= 1 && best.length == 0; --len) {
    for (u64 a = 1; a + len - 1 <= n; ++a) {
      auto h = exact_ham_reverse(s, a, a + len - 1, pairing);
      if (h.ham <= d) {
        best.start = a;
        best.length = len;
        best.mismatches = h.mismatches;
        break;
      }
    }
  }
  return best;
}

Bytes gen_nu(u64 length) {
  Bytes out;
  out.reserve(length);
  for (u64 k = 1; out.size() < length; ++k) {
    for (u64 i = 0; i < k && out.size() < length; ++i) out.push_back('1');
    for (u64 i = 0; i < k && out.size() < length; ++i) out.push_back('0');
  }
  return out;
}

namespace {

void check_target(const HardInstanceSpec& spec) {
  if (spec.target_ham != spec.d && spec.target_ham != spec.d + 1)
    throw ConfigError("target_ham must be d or d+1");
  if (spec.d * spec.d * 64 > spec.n) throw ConfigError("instance violates d^2 <= n/64");
}

// y = x with `flips` distinct random positions inverted.
Bytes flip_positions(const Bytes& x, u64 flips, std::mt19937_64& rng) {
  if (flips > x.size()) throw ConfigError("cannot flip more positions than the string holds");
  std::vector<u64> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  Bytes y = x;
  for (u64 t = 0; t < flips; ++t) y[idx[t]] = y[idx[t]] == '1' ? '0' : '1';
  return y;
}

}  // namespace

Bytes gen_mult_hard(const HardInstanceSpec& spec) {
  check_target(spec);
  if (spec.n % 4 != 0) throw ConfigError("n must be divisible by 4");
  const u64 q = spec.n / 4;
  if (spec.d > q || spec.target_ham > q) throw ConfigError("cannot place d ones in n/4 symbols");
  std::mt19937_64 rng(spec.seed);
  Bytes x(q, '0');
  std::vector<u64> idx(q);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  for (u64 t = 0; t < spec.d; ++t) x[idx[t]] = '1';
  Bytes y = flip_positions(x, spec.target_ham, rng);
  const Bytes nu = gen_nu(q);
  Bytes s;
  s.reserve(spec.n);
  s.insert(s.end(), nu.rbegin(), nu.rend());
  s.insert(s.end(), x.begin(), x.end());
  s.insert(s.end(), y.rbegin(), y.rend());
  s.insert(s.end(), nu.begin(), nu.end());
  return s;
}

Bytes gen_add_hard(const HardInstanceSpec& spec) {
  check_target(spec);
  if (spec.d == 0) throw ConfigError("additive instances need d >= 1");
  if (spec.E <= spec.d) throw ConfigError("additive instances need E > d");
  if (spec.n % 2 != 0 || spec.n < 2) throw ConfigError("n' must be even and positive");
  const u64 half = spec.n / 2;
  const u64 E = (spec.E + spec.d - 1) / spec.d * spec.d;  // rounded up to a multiple of d
  const u64 pad = E / spec.d;
  std::mt19937_64 rng(spec.seed);
  Bytes x(half);
  for (auto& c : x) c = (rng() & 1) ? '1' : '0';
  Bytes y = flip_positions(x, spec.target_ham, rng);
  Bytes s(E, '1');
  for (u64 i = 0; i < half; ++i) {
    if (i) s.insert(s.end(), pad, '1');
    s.push_back(x[i]);
  }
  for (u64 i = half; i-- > 0;) {
    s.push_back(y[i]);
    if (i) s.insert(s.end(), pad, '1');
  }
  s.insert(s.end(), E, '1');
  return s;
}

bool verify_answer(const Bytes& s, const PalindromeAnswer& ans, const SymbolMap* pairing) {
  if (ans.length == 0) return ans.mismatches.empty();
  if (ans.start < 1 || ans.start + ans.length - 1 > s.size()) return false;
  auto h = exact_ham_reverse(s, ans.start, ans.start + ans.length - 1, pairing);
  if (h.ham > ans.d) return false;
  std::vector<u64> got = ans.mismatches;
  std::sort(got.begin(), got.end());
  return got == h.mismatches;
}

Bytes random_string(u64 n, unsigned alphabet, std::mt19937_64& rng, const std::string& letters) {
  if (alphabet == 0) throw ConfigError("empty alphabet");
  std::uniform_int_distribution<unsigned> pick(0, alphabet - 1);
  Bytes s(n);
  for (auto& c : s) {
    const unsigned v = pick(rng);
    c = letters.empty() ? static_cast<std::uint8_t>(v) : static_cast<std::uint8_t>(letters.at(v));
  }
  return s;
}

void plant_near_palindrome(Bytes& s, u64 start, u64 len, u64 pairs, std::mt19937_64& rng,
                           const SymbolMap* pairing) {
  const SymbolMap& f = pairing_or_identity(pairing);
  if (len == 0) return;
  if (start < 1 || start + len - 1 > s.size()) throw ConfigError("plant outside the string");
  std::set<std::uint8_t> seen(s.begin(), s.end());
  Bytes alphabet(seen.begin(), seen.end());
  const u64 a = start - 1, b = start + len - 2;  // 0-based bounds
  for (u64 i = a, j = b; i < j; ++i, --j) s[j] = f[s[i]];
  const u64 half = len / 2;
  if (pairs > half) pairs = half;
  if (alphabet.size() < 2) return;
  std::vector<u64> idx(half);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (u64 t = 0; t < pairs; ++t) {
    const u64 i = a + idx[t], j = b - idx[t];
    std::uint8_t v;
    do v = alphabet[pick(rng)];
    while (v == f[s[i]]);
    s[j] = v;
  }
}

}  // namespace nearpal
