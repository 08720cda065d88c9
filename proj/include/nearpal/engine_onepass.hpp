#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nearpal/checkpoints.hpp"
#include "nearpal/fingerprint.hpp"
#include "nearpal/nearpal.hpp"

namespace nearpal {

enum class Mode { window, multiplicative, additive, exact };
const char* mode_name(Mode m);
std::optional<Mode> parse_mode(const std::string& s);

struct PalindromeAnswer {
  Mode mode = Mode::multiplicative;
  u64 start = 0;  // 1-based; 0 with length 0 for an empty answer
  u64 length = 0;
  std::vector<u64> mismatches;
  u64 d = 0;
  double epsilon = 0;
  u64 E = 0;
  u64 P = 0;
  u64 B = 0;
  u64 seed = 0;
};

struct EngineConfig {
  Mode mode = Mode::multiplicative;
  u64 d = 0;
  double epsilon = 0.5;
  u64 E = 16;
  u64 n_bound = 0;
  u64 seed = 1;
  bool doubling = true;
  std::optional<SymbolMap> pairing;
  u64 window = 0;  // window mode only; 0 means the whole stream
};

struct EngineStats {
  u64 peak_checkpoints = 0;
  u64 peak_fingerprint_words = 0;  // live snapshots plus master, two words per class
  u64 log_words = 0;
  u64 nearpal_calls = 0;
  u64 crt_dropped = 0;
};

// "ab" -> "aabb"
std::vector<std::uint8_t> double_stream(const std::vector<std::uint8_t>& symbols);

// Exact tracker of every suffix of length <= size via incremental mirrored
// comparison; O(size) per symbol.
class SlidingWindow {
 public:
  SlidingWindow(u64 size, u64 budget, const SymbolMap* pairing, bool even_only);
  void push(std::uint8_t s);
  u64 position() const { return x_; }
  u64 size() const { return size_; }
  // Longest suffix (length >= 1) within budget; 0 if none.
  u64 best_suffix_length() const;
  // HAM of the length-len suffix with its reverse; len <= min(x, size).
  u64 suffix_ham(u64 len) const { return ham_[len]; }
  // Mismatched absolute indices of the length-len suffix.
  std::vector<u64> suffix_mismatches(u64 len) const;
  std::uint8_t at(u64 pos) const { return ring_[pos % ring_.size()]; }

 private:
  bool differs(std::uint8_t a, std::uint8_t b) const { return a != (*pairing_)[b]; }
  u64 size_, budget_;
  bool even_only_;
  SymbolMap identity_;
  const SymbolMap* pairing_;
  u64 x_ = 0;
  std::vector<std::uint8_t> ring_;
  std::vector<u64> ham_, prev_;
};

class OnePassEngine {
 public:
  explicit OnePassEngine(const EngineConfig& cfg);
  void push(std::uint8_t symbol);
  PalindromeAnswer finalize() const;
  const EngineStats& stats() const { return stats_; }
  const FingerprintParams& params() const { return *params_; }
  u64 position() const { return x_; }
  u64 live_checkpoints() const;

 private:
  bool try_checkpoint(u64 c, const Snapshot& snap, const Snapshot& now);
  void consider(u64 start, u64 length, std::vector<u64> mismatches);

  EngineConfig cfg_;
  u64 scale_;
  ParamsPtr params_;
  std::optional<MasterFingerprints> master_;
  Snapshot origin_;
  std::optional<MultiplicativeSchedule> mult_;
  std::optional<AdditiveSchedule> add_;
  std::map<u64, Snapshot> snaps_;
  SlidingWindow window_;
  u64 x_ = 0;
  PalindromeAnswer best_;
  EngineStats stats_;
};

// Maps mismatches of the doubled stream back to original indices.
std::vector<u64> undouble_indices(const std::vector<u64>& doubled);

}  // namespace nearpal
