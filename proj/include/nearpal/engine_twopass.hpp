#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nearpal/engine_onepass.hpp"
#include "nearpal/fingerprint.hpp"
#include "nearpal/nearpal.hpp"

namespace nearpal {

class ReplayableSource {
 public:
  virtual ~ReplayableSource() = default;
  virtual u64 length() const = 0;
  virtual void replay(const std::function<void(std::uint8_t)>& sink) const = 0;
};

class MemorySource : public ReplayableSource {
 public:
  explicit MemorySource(std::vector<std::uint8_t> data) : data_(std::move(data)) {}
  u64 length() const override { return data_.size(); }
  void replay(const std::function<void(std::uint8_t)>& sink) const override {
    for (auto s : data_) sink(s);
  }

 private:
  std::vector<std::uint8_t> data_;
};

// Reads the file afresh on every replay.
class FileSource : public ReplayableSource {
 public:
  explicit FileSource(std::string path);
  u64 length() const override { return length_; }
  void replay(const std::function<void(std::uint8_t)>& sink) const override;

 private:
  std::string path_;
  u64 length_;
};

// Sparse class fingerprints of one substring, non-empty classes only.
struct Bundle {
  std::vector<std::vector<std::pair<u64, ClassFingerprint>>> families;
  bool operator==(const Bundle&) const = default;
  ClassFingerprint get(std::size_t family, u64 r) const;
  u64 words() const;
};

// Every class of S[lo.pos+1, hi.pos].
Bundle make_bundle(const Snapshot& lo, const Snapshot& hi);

// Concatenation of adjacent bundles, left to right.
class ConcatSource : public ClassSource {
 public:
  ConcatSource(std::vector<const Bundle*> parts, const FingerprintParams& params)
      : parts_(std::move(parts)), params_(params) {}
  ClassFingerprint cls(std::size_t family, u64 r) const override;
  const FingerprintParams& params() const override { return params_; }

 private:
  std::vector<const Bundle*> parts_;
  const FingerprintParams& params_;
};

struct GapEntry {
  Bundle bundle;            // S[m_prev+1, m] for each index m below
  std::vector<u64> indices;
};

struct CandidateMidpointList {
  u64 owner = 0;
  std::vector<u64> midpoints;  // ascending
  std::optional<Bundle> head;  // S[owner+1, x] when the first midpoint arrived
  std::vector<GapEntry> entries;
  std::map<u64, std::size_t> entry_of;  // midpoint -> entry holding the gap ending there
  u64 bound_violations = 0;             // times entries exceeded 4d+4

  struct Progression {
    u64 first, gap, count;
  };
  // Set when the midpoints are equally spaced.
  std::optional<Progression> progression() const;
};

struct TwoPassConfig {
  u64 d = 0;
  u64 n = 0;
  u64 seed = 1;
  bool doubling = true;
  std::optional<SymbolMap> pairing;
  u64 stride = 0;  // 0 means floor(sqrt(n)/2)
  // Drop checkpoints overlapping an earlier kept one before the second pass.
  // Saves buffer space but can miss the true start on periodic input.
  bool prune_overlaps = false;
  bool keep_all_lists = false;  // diagnostics: keep lists of pruned checkpoints
};

struct CheckpointInfo {
  u64 pos = 0;
  Snapshot snap;
  u64 longest = 0;
};

struct TwoPassStats {
  u64 checkpoints_seen = 0;
  u64 checkpoints_kept = 0;
  u64 midpoints = 0;
  u64 gap_entries = 0;
  u64 bound_violations = 0;
  u64 peak_buffer = 0;
  u64 nearpal_calls = 0;
  u64 recover_calls = 0;
  u64 crt_dropped = 0;
};

struct FirstPassResult {
  u64 ell = 0;
  PalindromeAnswer best;
  std::vector<CheckpointInfo> checkpoints;  // after end-of-pass pruning
  std::map<u64, CandidateMidpointList> lists;
};

// Greedy left-to-right: drop c when some kept c' has c' < c < c' + ell - sqrt_n.
std::vector<u64> preprocess_checkpoints(const std::vector<u64>& checkpoints, u64 ell, u64 sqrt_n);

class TwoPassEngine {
 public:
  explicit TwoPassEngine(const TwoPassConfig& cfg);
  FirstPassResult first_pass(const ReplayableSource& src);
  // Tests S[m_i+1, m_j] from stored gap fingerprints.
  NearPalResult recover(u64 mi, u64 mj, const CandidateMidpointList& list) const;
  PalindromeAnswer second_pass(const ReplayableSource& src, const FirstPassResult& first);
  PalindromeAnswer run(const ReplayableSource& src);

  const FingerprintParams& params() const { return *params_; }
  u64 sqrt_n() const { return s_; }
  u64 stride() const { return h_; }
  const TwoPassStats& stats() const { return stats_; }

 private:
  TwoPassConfig cfg_;
  u64 scale_, s_, h_, reach_;
  ParamsPtr params_;
  TwoPassStats stats_;
};

}  // namespace nearpal
