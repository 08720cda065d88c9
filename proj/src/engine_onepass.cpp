#include "nearpal/engine_onepass.hpp"

#include <algorithm>

#include "nearpal/errors.hpp"

namespace nearpal {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::window: return "window";
    case Mode::multiplicative: return "mult";
    case Mode::additive: return "add";
    case Mode::exact: return "exact";
  }
  return "?";
}

std::optional<Mode> parse_mode(const std::string& s) {
  if (s == "window") return Mode::window;
  if (s == "mult") return Mode::multiplicative;
  if (s == "add") return Mode::additive;
  if (s == "exact") return Mode::exact;
  return std::nullopt;
}

std::vector<std::uint8_t> double_stream(const std::vector<std::uint8_t>& symbols) {
  std::vector<std::uint8_t> out;
  out.reserve(symbols.size() * 2);
  for (auto s : symbols) {
    out.push_back(s);
    out.push_back(s);
  }
  return out;
}

std::vector<u64> undouble_indices(const std::vector<u64>& doubled) {
  std::vector<u64> out;
  out.reserve(doubled.size());
  for (u64 i : doubled) out.push_back((i + 1) / 2);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SlidingWindow::SlidingWindow(u64 size, u64 budget, const SymbolMap* pairing, bool even_only)
    : size_(size), budget_(budget), even_only_(even_only), identity_(identity_map()) {
  pairing_ = pairing ? pairing : &identity_;
  ring_.assign(size + 1, 0);
  ham_.assign(size + 1, 0);
  prev_.assign(size + 1, 0);
}

void SlidingWindow::push(std::uint8_t s) {
  ++x_;
  ring_[x_ % ring_.size()] = s;
  std::swap(prev_, ham_);
  const u64 top = std::min(x_, size_);
  if (top >= 1) ham_[1] = differs(s, s) ? 1 : 0;
  for (u64 L = 2; L <= top; ++L) ham_[L] = prev_[L - 2] + (differs(at(x_ - L + 1), s) ? 2 : 0);
}

u64 SlidingWindow::best_suffix_length() const {
  for (u64 L = std::min(x_, size_); L >= 1; --L) {
    if (even_only_ && L % 2) continue;
    if (ham_[L] <= budget_) return L;
  }
  return 0;
}

std::vector<u64> SlidingWindow::suffix_mismatches(u64 len) const {
  std::vector<u64> out;
  const u64 a = x_ - len + 1;
  for (u64 i = a; i <= x_; ++i)
    if (differs(at(i), at(a + x_ - i))) out.push_back(i);
  return out;
}

namespace {
ParamsPtr params_for(const EngineConfig& cfg, u64 scale) {
  return FingerprintParams::make(std::max<u64>(cfg.n_bound, 1) * scale, cfg.d * scale, cfg.seed);
}
}  // namespace

OnePassEngine::OnePassEngine(const EngineConfig& cfg)
    : cfg_(cfg),
      scale_(cfg.doubling ? 2 : 1),
      params_(params_for(cfg, scale_)),
      window_(cfg.mode == Mode::window ? (cfg.window ? cfg.window : std::max<u64>(cfg.n_bound, 1))
                                       : 2 * cfg.d,
              cfg.d, cfg.pairing ? &*cfg_.pairing : nullptr, !cfg.doubling) {
  if (cfg.mode == Mode::exact) throw ConfigError("exact mode needs the two-pass engine");
  if (cfg.pairing && !is_involution(*cfg.pairing)) throw ConfigError("pairing is not an involution");
  if (cfg.mode == Mode::multiplicative) mult_.emplace(cfg.epsilon, cfg.n_bound);
  if (cfg.mode == Mode::additive) add_.emplace(cfg.E);
  if (cfg.mode != Mode::window) {
    master_.emplace(params_);
    origin_ = master_->snapshot();
  }
  best_.mode = cfg.mode;
  best_.d = cfg.d;
  best_.epsilon = cfg.mode == Mode::multiplicative ? cfg.epsilon : 0;
  best_.E = cfg.mode == Mode::additive ? cfg.E : 0;
  best_.P = params_->P;
  best_.B = params_->B;
  best_.seed = cfg.seed;
}

u64 OnePassEngine::live_checkpoints() const { return master_ ? snaps_.size() + 1 : 0; }

void OnePassEngine::consider(u64 start, u64 length, std::vector<u64> mismatches) {
  if (length < best_.length || (length == best_.length && start >= best_.start)) return;
  best_.start = start;
  best_.length = length;
  best_.mismatches = std::move(mismatches);
}

bool OnePassEngine::try_checkpoint(u64 c, const Snapshot& snap, const Snapshot& now) {
  ++stats_.nearpal_calls;
  auto res = near_palindrome(scale_ * c + 1, scale_ * x_, snap, now, scale_ * cfg_.d);
  stats_.crt_dropped += res.dropped;
  if (res.verdict != Verdict::accepted) return false;
  consider(c + 1, x_ - c, scale_ == 2 ? undouble_indices(res.mismatches) : res.mismatches);
  return true;
}

void OnePassEngine::push(std::uint8_t symbol) {
  if (x_ >= cfg_.n_bound) throw InternalError("stream longer than n_bound");
  ++x_;
  const SymbolMap* pairing = cfg_.pairing ? &*cfg_.pairing : nullptr;
  window_.push(symbol);
  if (u64 L = window_.best_suffix_length(); L > 0) {
    if (L > best_.length) consider(x_ - L + 1, L, window_.suffix_mismatches(L));
  }
  if (!master_) {
    stats_.peak_fingerprint_words = 2 * params_->classes_per_snapshot();
    return;
  }
  for (u64 t = 0; t < scale_; ++t) master_->append(symbol, pairing);
  const Snapshot now = master_->snapshot();
  if (mult_) {
    std::vector<u64> removed;
    if (mult_->advance(x_, &removed)) snaps_[x_] = now;
    for (u64 c : removed) snaps_.erase(c);
  } else if (add_ && add_->advance(x_)) {
    snaps_[x_] = now;
  }
  // Oldest first; the first acceptance is the longest candidate this step.
  auto eligible = [&](u64 c) { return x_ - c > best_.length && (scale_ == 2 || (x_ - c) % 2 == 0); };
  bool done = false;
  if (x_ > best_.length) {
    if (eligible(0)) done = try_checkpoint(0, origin_, now);
    for (auto it = snaps_.begin(); !done && it != snaps_.end(); ++it) {
      if (x_ - it->first <= best_.length) break;
      if (!eligible(it->first)) continue;
      done = try_checkpoint(it->first, it->second, now);
    }
  }
  const u64 live = live_checkpoints();
  stats_.peak_checkpoints = std::max(stats_.peak_checkpoints, live);
  stats_.peak_fingerprint_words =
      std::max(stats_.peak_fingerprint_words, 2 * (live + 1) * params_->classes_per_snapshot());
  stats_.log_words = master_->log_words();
}

PalindromeAnswer OnePassEngine::finalize() const { return best_; }

}  // namespace nearpal
