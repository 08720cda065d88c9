#include "nearpal/checkpoints.hpp"

#include <algorithm>
#include <cmath>

#include "nearpal/errors.hpp"

namespace nearpal {

double alpha_for(double epsilon) { return std::sqrt(1.0 + epsilon) - 1.0; }

int multiplicative_k0(double alpha) {
  return static_cast<int>(
      std::ceil(std::log((1 + alpha) * (1 + alpha) / alpha) / std::log(1 + alpha)));
}

double checkpoint_envelope(double C, u64 n, double epsilon) {
  return C * std::log2(static_cast<double>(n)) / (epsilon * std::log2(1 + epsilon));
}

MultiplicativeSchedule::MultiplicativeSchedule(double epsilon, u64 n_bound) {
  if (!(epsilon > 0)) throw ConfigError("epsilon must be positive");
  alpha_ = alpha_for(epsilon);
  k0_ = multiplicative_k0(alpha_);
  for (int k = k0_;; ++k) {
    const double g = std::pow(1 + alpha_, k);
    stride_.push_back(std::max<u64>(1, static_cast<u64>(std::floor(alpha_ * g / ((1 + alpha_) * (1 + alpha_))))));
    reach_.push_back(static_cast<u64>(std::floor(2 * g)));
    if (reach_.back() >= n_bound) break;
  }
  levels_.resize(stride_.size());
}

bool MultiplicativeSchedule::advance(u64 x, std::vector<u64>* removed) {
  bool added = false;
  for (std::size_t i = 0; i < stride_.size(); ++i) {
    if (x % stride_[i] == 0) {
      levels_[i].push_back(x);
      live_[x].push_back(k0_ + static_cast<int>(i));
      added = true;
    }
  }
  for (std::size_t i = 0; i < stride_.size(); ++i) {
    auto& dq = levels_[i];
    while (!dq.empty() && dq.front() + reach_[i] < x) {
      const u64 c = dq.front();
      dq.pop_front();
      auto it = live_.find(c);
      auto& lv = it->second;
      lv.erase(std::find(lv.begin(), lv.end(), k0_ + static_cast<int>(i)));
      if (lv.empty()) {
        live_.erase(it);
        if (removed) removed->push_back(c);
      }
    }
  }
  return added;
}

u64 MultiplicativeSchedule::capacity() const {
  u64 total = 0;
  for (std::size_t i = 0; i < stride_.size(); ++i) total += reach_[i] / stride_[i] + 1;
  return total;
}

std::string MultiplicativeSchedule::observation_violation(u64 x) const {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const auto& dq = levels_[i];
    auto tag = [&](const char* what) {
      return "level " + std::to_string(k0_ + static_cast<int>(i)) + " at x=" + std::to_string(x) + ": " + what;
    };
    if (x >= stride_[i] && (dq.empty() || dq.back() + stride_[i] <= x)) return tag("newest checkpoint missing");
    if (dq.empty()) continue;
    if (dq.back() > x || dq.front() + reach_[i] < x) return tag("checkpoint outside the reach window");
    // entries are distinct multiples of the stride, so a full span means equal spacing
    if (dq.front() % stride_[i] || dq.back() % stride_[i] ||
        dq.back() - dq.front() != stride_[i] * (dq.size() - 1))
      return tag("spacing differs from the stride");
    if (dq.size() > reach_[i] / stride_[i] + 1) return tag("too many checkpoints");
  }
  return {};
}

AdditiveSchedule::AdditiveSchedule(u64 E) : stride_(std::max<u64>(1, E / 2)) {
  if (E == 0) throw ConfigError("E must be at least 1");
}

bool AdditiveSchedule::advance(u64 x) {
  if (x % stride_ != 0) return false;
  live_.push_back(x);
  return true;
}

}  // namespace nearpal
