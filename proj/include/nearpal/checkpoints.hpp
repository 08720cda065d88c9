#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "nearpal/modarith.hpp"

namespace nearpal {

// k0 = ceil(log((1+a)^2/a) / log(1+a)); guarantees level strides >= 1.
int multiplicative_k0(double alpha);
double alpha_for(double epsilon);

// C * log2(n) / (eps * log2(1+eps)).
double checkpoint_envelope(double C, u64 n, double epsilon);

// Leveled schedule. Position 0 (the empty prefix) belongs to every level.
class MultiplicativeSchedule {
 public:
  MultiplicativeSchedule(double epsilon, u64 n_bound);

  // Processes position x >= 1. Returns true if x became a checkpoint;
  // positions whose last level expired are appended to removed.
  bool advance(u64 x, std::vector<u64>* removed = nullptr);

  // Live positions mapped to their level sets, oldest first.
  const std::map<u64, std::vector<int>>& live() const { return live_; }
  std::size_t size() const { return live_.size(); }

  double alpha() const { return alpha_; }
  int k0() const { return k0_; }
  int kmax() const { return k0_ + static_cast<int>(stride_.size()) - 1; }
  u64 stride(int k) const { return stride_[k - k0_]; }
  u64 reach(int k) const { return reach_[k - k0_]; }
  // Live level-k positions, ascending.
  const std::deque<u64>& level(int k) const { return levels_[k - k0_]; }

  // Upper bound on live checkpoints: sum over levels of reach/stride + 1.
  u64 capacity() const;

  // Checks window, spacing and per-level cardinality after advance(x).
  // Empty when all hold, otherwise a description of the first failure.
  std::string observation_violation(u64 x) const;

 private:
  double alpha_;
  int k0_;
  std::vector<u64> stride_;  // floor(a (1+a)^(k-2))
  std::vector<u64> reach_;   // floor(2 (1+a)^k); level-k c is dropped once c + reach < x
  std::vector<std::deque<u64>> levels_;
  std::map<u64, std::vector<int>> live_;
};

class AdditiveSchedule {
 public:
  explicit AdditiveSchedule(u64 E);
  bool advance(u64 x);
  const std::vector<u64>& live() const { return live_; }
  std::size_t size() const { return live_.size(); }
  u64 stride() const { return stride_; }

 private:
  u64 stride_;
  std::vector<u64> live_;
};

}  // namespace nearpal
