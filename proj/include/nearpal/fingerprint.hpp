#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nearpal/modarith.hpp"

namespace nearpal {

// Symbol pairing f; identity for plain palindromes.
using SymbolMap = std::array<std::uint8_t, 256>;
SymbolMap identity_map();
SymbolMap dna_complement_map();
bool is_involution(const SymbolMap& f);

inline u64 encode(std::uint8_t v) { return static_cast<u64>(v) + 1; }

inline constexpr u64 kMersenne61 = (u64{1} << 61) - 1;

struct FingerprintParams {
  u64 P = kMersenne61;
  u64 B = 2;
  u64 B_inv = 1;
  u64 n_bound = 0;
  u64 d = 0;
  u64 beta_num = 1;
  u64 beta_den = 16;
  std::vector<u64> first_level;   // 𝒫, with repetition
  std::vector<u64> second_level;  // 𝒬
  u64 seed = 0;
  std::vector<std::string> notes;  // widening and capping log

  static std::shared_ptr<const FingerprintParams> make(u64 n_bound, u64 d, u64 seed,
                                                       u64 beta_num = 1, u64 beta_den = 16);
  // Fixed-value constructor for tests; primes are used as given.
  static std::shared_ptr<const FingerprintParams> custom(u64 P, u64 B, u64 n_bound, u64 d,
                                                         std::vector<u64> first,
                                                         std::vector<u64> second);

  // Family f < |𝒫| is first level (mod p_f); the rest are (p_j, q_k) pairs.
  std::size_t num_first() const { return first_level.size(); }
  std::size_t num_families() const { return first_level.size() * (1 + second_level.size()); }
  std::size_t second_family(std::size_t j, std::size_t k) const {
    return first_level.size() + j * second_level.size() + k;
  }
  u64 modulus(std::size_t f) const { return moduli_[f]; }

  u64 mul(u64 a, u64 b) const {
    if (P != kMersenne61) return mul_mod(a, b, P);
    u128 x = static_cast<u128>(a) * b;
    u64 r = static_cast<u64>(x & kMersenne61) + static_cast<u64>(x >> 61);
    r = (r & kMersenne61) + (r >> 61);
    return r >= kMersenne61 ? r - kMersenne61 : r;
  }
  u64 add(u64 a, u64 b) const { return add_mod(a, b, P); }
  u64 sub(u64 a, u64 b) const { return sub_mod(a, b, P); }
  u64 pow_B(u64 k) const { return k < pow_.size() ? pow_[k] : mod_pow(B, k, P); }
  u64 pow_B_inv(u64 k) const { return k < ipow_.size() ? ipow_[k] : mod_pow(B_inv, k, P); }

  // Total non-empty classes a snapshot can hold.
  u64 classes_per_snapshot() const;

 private:
  void finalize();
  std::vector<u64> moduli_;
  std::vector<u64> pow_, ipow_;
};

using ParamsPtr = std::shared_ptr<const FingerprintParams>;

struct ClassFingerprint {
  u64 forward = 0;
  u64 reverse = 0;
  u64 count = 0;
  bool operator==(const ClassFingerprint&) const = default;
};

// seq holds already-encoded (nonzero) symbols; ranks start at 1.
u64 forward_fp(const std::vector<u64>& seq, u64 B, u64 P);
u64 reverse_fp(const std::vector<u64>& seq, u64 B, u64 P);
u64 forward_fp(const std::vector<u64>& seq, const FingerprintParams& params);
u64 reverse_fp(const std::vector<u64>& seq, const FingerprintParams& params);

ClassFingerprint concat_class_fp(const ClassFingerprint& left, const ClassFingerprint& right,
                                 const FingerprintParams& params);

u64 mirror_class(u64 r, u64 m, u64 c, u64 x);

// Append-only history of every class prefix value, one row per position.
class FingerprintLog {
 public:
  explicit FingerprintLog(ParamsPtr params);
  void append(u64 forward_symbol, u64 reverse_symbol);
  u64 length() const { return length_; }
  const ParamsPtr& params_ptr() const { return params_; }
  const FingerprintParams& params() const { return *params_; }
  ClassFingerprint prefix(std::size_t family, u64 r, u64 pos) const;
  std::size_t words() const { return fwd_.size() + rev_.size(); }

 private:
  ParamsPtr params_;
  std::size_t families_;
  u64 length_ = 0;
  std::vector<u64> fwd_, rev_;
};

// Immutable view of the master fingerprints at one position.
struct Snapshot {
  std::shared_ptr<const FingerprintLog> log;
  u64 pos = 0;
  ClassFingerprint cls(std::size_t family, u64 r) const { return log->prefix(family, r, pos); }
};

class MasterFingerprints {
 public:
  explicit MasterFingerprints(ParamsPtr params);
  // Appends S[x]; forward side uses f(S[x]) when a pairing is given.
  void append(std::uint8_t symbol, const SymbolMap* pairing = nullptr);
  u64 position() const { return log_->length(); }
  Snapshot snapshot() const { return Snapshot{log_, log_->length()}; }
  ClassFingerprint first_level(std::size_t j, u64 r) const;
  ClassFingerprint second_level(std::size_t j, std::size_t k, u64 r) const;
  const FingerprintParams& params() const { return log_->params(); }
  const ParamsPtr& params_ptr() const { return log_->params_ptr(); }
  std::size_t log_words() const { return log_->words(); }

 private:
  std::shared_ptr<FingerprintLog> log_;
};

// Class fingerprints of S[lo.pos+1, hi.pos], ranks renumbered from 1.
ClassFingerprint slice_class_fp(const Snapshot& lo, const Snapshot& hi, std::size_t family, u64 r);

// Per-class fingerprints of one substring S[c, x].
class ClassSource {
 public:
  virtual ~ClassSource() = default;
  virtual ClassFingerprint cls(std::size_t family, u64 r) const = 0;
  virtual const FingerprintParams& params() const = 0;
};

class SlicedSource : public ClassSource {
 public:
  SlicedSource(Snapshot lo, Snapshot hi);
  ClassFingerprint cls(std::size_t family, u64 r) const override {
    return slice_class_fp(lo_, hi_, family, r);
  }
  const FingerprintParams& params() const override { return hi_.log->params(); }

 private:
  Snapshot lo_, hi_;
};

}  // namespace nearpal
