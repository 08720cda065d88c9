#include "nearpal/fingerprint.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "nearpal/errors.hpp"

namespace nearpal {

SymbolMap identity_map() {
  SymbolMap f{};
  for (int i = 0; i < 256; ++i) f[i] = static_cast<std::uint8_t>(i);
  return f;
}

SymbolMap dna_complement_map() {
  SymbolMap f = identity_map();
  auto pair = [&](char a, char b) {
    f[static_cast<std::uint8_t>(a)] = static_cast<std::uint8_t>(b);
    f[static_cast<std::uint8_t>(b)] = static_cast<std::uint8_t>(a);
  };
  pair('A', 'T');
  pair('C', 'G');
  pair('a', 't');
  pair('c', 'g');
  return f;
}

bool is_involution(const SymbolMap& f) {
  for (int i = 0; i < 256; ++i)
    if (f[f[i]] != i) return false;
  return true;
}

namespace {

u64 ceil_log2(u64 n) {
  u64 k = 0;
  while ((u64{1} << k) < n) ++k;
  return k;
}

// Product of the list, saturating at 2^64 - 1.
u64 saturating_product(const std::vector<u64>& v) {
  u128 prod = 1;
  for (u64 x : v) {
    prod *= x;
    if (prod > static_cast<u128>(~u64{0})) return ~u64{0};
  }
  return static_cast<u64>(prod);
}

}  // namespace

std::shared_ptr<const FingerprintParams> FingerprintParams::make(u64 n_bound, u64 d, u64 seed,
                                                                 u64 beta_num, u64 beta_den) {
  if (beta_num == 0 || beta_den == 0) throw ConfigError("beta must be positive");
  auto p = std::make_shared<FingerprintParams>();
  p->n_bound = n_bound;
  p->d = d;
  p->seed = seed;
  p->beta_num = beta_num;
  p->beta_den = beta_den;
  std::mt19937_64 rng(seed);

  p->P = kMersenne61;
  std::uniform_int_distribution<u64> pickB(2, p->P - 2);
  p->B = pickB(rng);
  p->B_inv = mod_inv(p->B, p->P);

  const double n = static_cast<double>(std::max<u64>(n_bound, 2));
  const double lg = std::log2(n);
  const double scale = static_cast<double>(d) * beta_den / beta_num * lg * lg;

  PrimeRange first = make_range(static_cast<u64>(std::ceil(scale)),
                                static_cast<u64>(std::floor(34.0 * scale)));
  if (int w = widen_range(first, 2)) {
    std::ostringstream os;
    os << "first-level prime range widened " << w << "x to [" << first.lo << "," << first.hi << "]";
    p->notes.push_back(os.str());
  }
  const u64 draws = std::max<u64>(2, 2 * ceil_log2(std::max<u64>(n_bound, 1)));
  for (u64 i = 0; i < draws; ++i) p->first_level.push_back(sample_prime(first, rng));

  PrimeRange second = make_range(static_cast<u64>(std::floor(lg)), static_cast<u64>(std::ceil(3 * lg)));
  int w2 = widen_range(second, 2);
  p->second_level = primes_in_range(second);
  while (saturating_product(p->second_level) <= n_bound) {
    second.hi *= 2;
    ++w2;
    p->second_level = primes_in_range(second);
  }
  if (w2) {
    std::ostringstream os;
    os << "second-level prime range widened " << w2 << "x to [" << second.lo << "," << second.hi
       << "]";
    p->notes.push_back(os.str());
  }
  p->finalize();
  return p;
}

std::shared_ptr<const FingerprintParams> FingerprintParams::custom(u64 P, u64 B, u64 n_bound, u64 d,
                                                                   std::vector<u64> first,
                                                                   std::vector<u64> second) {
  auto p = std::make_shared<FingerprintParams>();
  p->P = P;
  p->B = B;
  p->B_inv = mod_inv(B, P);
  p->n_bound = n_bound;
  p->d = d;
  p->first_level = std::move(first);
  p->second_level = std::move(second);
  p->finalize();
  return p;
}

void FingerprintParams::finalize() {
  moduli_.clear();
  for (u64 p : first_level) moduli_.push_back(p);
  for (u64 p : first_level)
    for (u64 q : second_level) moduli_.push_back(p * q);
  const std::size_t len = static_cast<std::size_t>(n_bound) + 2;
  pow_.assign(len, 1);
  ipow_.assign(len, 1);
  for (std::size_t k = 1; k < len; ++k) {
    pow_[k] = mul(pow_[k - 1], B);
    ipow_[k] = mul(ipow_[k - 1], B_inv);
  }
}

u64 FingerprintParams::classes_per_snapshot() const {
  u64 total = 0;
  for (u64 m : moduli_) total += std::min(m, n_bound);
  return total;
}

u64 forward_fp(const std::vector<u64>& seq, u64 B, u64 P) {
  u64 acc = 0, pw = 1;
  for (u64 s : seq) {
    pw = mul_mod(pw, B, P);
    acc = add_mod(acc, mul_mod(s % P, pw, P), P);
  }
  return acc;
}

u64 reverse_fp(const std::vector<u64>& seq, u64 B, u64 P) {
  const u64 inv = mod_inv(B, P);
  u64 acc = 0, pw = 1;
  for (u64 s : seq) {
    pw = mul_mod(pw, inv, P);
    acc = add_mod(acc, mul_mod(s % P, pw, P), P);
  }
  return acc;
}

u64 forward_fp(const std::vector<u64>& seq, const FingerprintParams& params) {
  return forward_fp(seq, params.B, params.P);
}

u64 reverse_fp(const std::vector<u64>& seq, const FingerprintParams& params) {
  return reverse_fp(seq, params.B, params.P);
}

ClassFingerprint concat_class_fp(const ClassFingerprint& left, const ClassFingerprint& right,
                                 const FingerprintParams& params) {
  ClassFingerprint out;
  out.forward = params.add(left.forward, params.mul(params.pow_B(left.count), right.forward));
  out.reverse = params.add(left.reverse, params.mul(params.pow_B_inv(left.count), right.reverse));
  out.count = left.count + right.count;
  return out;
}

u64 mirror_class(u64 r, u64 m, u64 c, u64 x) {
  const u64 s = (c % m + x % m) % m;
  return (s + m - r % m) % m;
}

FingerprintLog::FingerprintLog(ParamsPtr params)
    : params_(std::move(params)), families_(params_->num_families()) {
  fwd_.reserve(static_cast<std::size_t>(params_->n_bound) * families_);
  rev_.reserve(static_cast<std::size_t>(params_->n_bound) * families_);
}

void FingerprintLog::append(u64 forward_symbol, u64 reverse_symbol) {
  const auto& pr = *params_;
  if (length_ >= pr.n_bound) throw InternalError("stream exceeds n_bound");
  const u64 x = ++length_;
  for (std::size_t f = 0; f < families_; ++f) {
    const u64 m = pr.modulus(f);
    const u64 rank = (x + m - 1) / m;
    u64 pf = 0, pr_ = 0;
    if (x > m) {
      const std::size_t row = static_cast<std::size_t>(x - m - 1) * families_ + f;
      pf = fwd_[row];
      pr_ = rev_[row];
    }
    fwd_.push_back(pr.add(pf, pr.mul(forward_symbol, pr.pow_B(rank))));
    rev_.push_back(pr.add(pr_, pr.mul(reverse_symbol, pr.pow_B_inv(rank))));
  }
}

ClassFingerprint FingerprintLog::prefix(std::size_t family, u64 r, u64 pos) const {
  if (pos == 0) return {};
  const u64 m = params_->modulus(family);
  const u64 back = (pos % m + m - r % m) % m;
  if (back >= pos) return {};
  const u64 j = pos - back;
  const std::size_t row = static_cast<std::size_t>(j - 1) * families_ + family;
  return {fwd_[row], rev_[row], (j + m - 1) / m};
}

MasterFingerprints::MasterFingerprints(ParamsPtr params)
    : log_(std::make_shared<FingerprintLog>(std::move(params))) {}

void MasterFingerprints::append(std::uint8_t symbol, const SymbolMap* pairing) {
  const u64 rev = encode(symbol);
  const u64 fwd = pairing ? encode((*pairing)[symbol]) : rev;
  log_->append(fwd, rev);
}

ClassFingerprint MasterFingerprints::first_level(std::size_t j, u64 r) const {
  return log_->prefix(j, r, position());
}

ClassFingerprint MasterFingerprints::second_level(std::size_t j, std::size_t k, u64 r) const {
  return log_->prefix(params().second_family(j, k), r, position());
}

ClassFingerprint slice_class_fp(const Snapshot& lo, const Snapshot& hi, std::size_t family, u64 r) {
  const auto& pl = lo.log->params();
  const auto& ph = hi.log->params();
  if (&pl != &ph && (pl.P != ph.P || pl.B != ph.B || pl.num_families() != ph.num_families()))
    throw InternalError("slice across different fingerprint params");
  if (lo.pos > hi.pos) throw InternalError("slice with lo after hi");
  const ClassFingerprint a = lo.cls(family, r);
  const ClassFingerprint b = hi.cls(family, r);
  ClassFingerprint out;
  out.count = b.count - a.count;
  out.forward = ph.mul(ph.sub(b.forward, a.forward), ph.pow_B_inv(a.count));
  out.reverse = ph.mul(ph.sub(b.reverse, a.reverse), ph.pow_B(a.count));
  return out;
}

SlicedSource::SlicedSource(Snapshot lo, Snapshot hi) : lo_(std::move(lo)), hi_(std::move(hi)) {}

}  // namespace nearpal
