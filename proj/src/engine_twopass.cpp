#include "nearpal/engine_twopass.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <unordered_map>

#include "nearpal/errors.hpp"

namespace nearpal {

FileSource::FileSource(std::string path) : path_(std::move(path)) {
  std::error_code ec;
  length_ = std::filesystem::file_size(path_, ec);
  if (ec) throw InputError("cannot stat " + path_ + ": " + ec.message());
}

void FileSource::replay(const std::function<void(std::uint8_t)>& sink) const {
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw InputError("cannot open " + path_);
  std::vector<char> buf(1 << 16);
  u64 seen = 0;
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) sink(static_cast<std::uint8_t>(buf[i]));
    seen += static_cast<u64>(got);
  }
  if (seen != length_) throw InputError(path_ + " changed between passes");
}

ClassFingerprint Bundle::get(std::size_t family, u64 r) const {
  const auto& v = families[family];
  auto it = std::lower_bound(v.begin(), v.end(), r,
                             [](const auto& e, u64 key) { return e.first < key; });
  if (it == v.end() || it->first != r) return {};
  return it->second;
}

u64 Bundle::words() const {
  u64 w = 0;
  for (const auto& v : families) w += 2 * v.size();
  return w;
}

Bundle make_bundle(const Snapshot& lo, const Snapshot& hi) {
  const auto& pr = hi.log->params();
  Bundle b;
  b.families.resize(pr.num_families());
  for (std::size_t f = 0; f < pr.num_families(); ++f) {
    const u64 m = pr.modulus(f);
    const u64 last = std::min(hi.pos, lo.pos + m);
    auto& v = b.families[f];
    for (u64 i = lo.pos + 1; i <= last; ++i) v.emplace_back(i % m, slice_class_fp(lo, hi, f, i % m));
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& c) { return a.first < c.first; });
  }
  return b;
}

ClassFingerprint ConcatSource::cls(std::size_t family, u64 r) const {
  ClassFingerprint acc;
  for (const Bundle* b : parts_) acc = concat_class_fp(acc, b->get(family, r), params_);
  return acc;
}

std::optional<CandidateMidpointList::Progression> CandidateMidpointList::progression() const {
  if (midpoints.empty()) return std::nullopt;
  if (midpoints.size() == 1) return Progression{midpoints[0], 0, 1};
  const u64 gap = midpoints[1] - midpoints[0];
  for (std::size_t i = 2; i < midpoints.size(); ++i)
    if (midpoints[i] - midpoints[i - 1] != gap) return std::nullopt;
  return Progression{midpoints[0], gap, midpoints.size()};
}

std::vector<u64> preprocess_checkpoints(const std::vector<u64>& checkpoints, u64 ell, u64 sqrt_n) {
  std::vector<u64> sorted = checkpoints;
  std::sort(sorted.begin(), sorted.end());
  const u64 span = ell > sqrt_n ? ell - sqrt_n : 0;
  std::vector<u64> kept;
  for (u64 c : sorted) {
    if (!kept.empty() && kept.back() < c && c < kept.back() + span) continue;
    kept.push_back(c);
  }
  return kept;
}

TwoPassEngine::TwoPassEngine(const TwoPassConfig& cfg) : cfg_(cfg) {
  if (cfg.pairing && !is_involution(*cfg.pairing)) throw ConfigError("pairing is not an involution");
  scale_ = cfg.doubling ? 2 : 1;
  s_ = std::max<u64>(1, static_cast<u64>(std::sqrt(static_cast<double>(cfg.n))));
  while (s_ * s_ > cfg.n && s_ > 1) --s_;
  while ((s_ + 1) * (s_ + 1) <= cfg.n) ++s_;
  h_ = cfg.stride ? cfg.stride : std::max<u64>(1, s_ / 2);
  reach_ = h_ + 1;
  params_ = FingerprintParams::make(std::max<u64>(cfg.n, 1) * scale_, cfg.d * scale_, cfg.seed);
}

namespace {

void consider(PalindromeAnswer& best, u64 start, u64 length, std::vector<u64> mismatches) {
  if (length < best.length || (length == best.length && start >= best.start)) return;
  best.start = start;
  best.length = length;
  best.mismatches = std::move(mismatches);
}

}  // namespace

FirstPassResult TwoPassEngine::first_pass(const ReplayableSource& src) {
  if (src.length() != cfg_.n) throw InputError("stream length differs from the configured n");
  FirstPassResult out;
  out.best.mode = Mode::exact;
  const SymbolMap* pairing = cfg_.pairing ? &*cfg_.pairing : nullptr;
  MasterFingerprints master(params_);
  std::vector<CheckpointInfo> cps{{0, master.snapshot(), 0}};
  SlidingWindow win(2 * s_, cfg_.d, pairing, !cfg_.doubling);
  const u64 budget = scale_ * cfg_.d;
  u64 x = 0;

  src.replay([&](std::uint8_t sym) {
    ++x;
    for (u64 t = 0; t < scale_; ++t) master.append(sym, pairing);
    const Snapshot now = master.snapshot();
    if (x % h_ == 0) cps.push_back({x, now, 0});
    win.push(sym);
    if (u64 L = win.best_suffix_length(); L > out.best.length)
      consider(out.best, x - L + 1, L, win.suffix_mismatches(L));

    for (auto& cp : cps) {
      if (cp.pos >= x) continue;
      const u64 L = x - cp.pos;
      if (!cfg_.doubling && L % 2) continue;
      if (L + 2 * h_ < out.best.length) continue;
      ++stats_.nearpal_calls;
      auto r = near_palindrome(scale_ * cp.pos + 1, scale_ * x, cp.snap, now, budget);
      stats_.crt_dropped += r.dropped;
      if (r.verdict != Verdict::accepted) continue;
      cp.longest = std::max(cp.longest, L);
      consider(out.best, cp.pos + 1, L, scale_ == 2 ? undouble_indices(r.mismatches) : r.mismatches);
    }

    if (x >= 2 * s_ && win.suffix_ham(2 * s_) <= cfg_.d) {
      const u64 m = x - s_;
      const CheckpointInfo& owner = cps.back();
      auto& list = out.lists[owner.pos];
      list.owner = owner.pos;
      if (list.midpoints.empty()) {
        list.head = make_bundle(owner.snap, now);
      } else {
        const u64 mi = list.midpoints.back();
        Bundle gap = make_bundle(Snapshot{now.log, scale_ * mi}, Snapshot{now.log, scale_ * m});
        std::size_t slot = list.entries.size();
        for (std::size_t e = 0; e < list.entries.size(); ++e) {
          if (list.entries[e].bundle == gap && list.entries[e].indices.size() < cfg_.d) {
            slot = e;
            break;
          }
        }
        if (slot == list.entries.size()) {
          list.entries.push_back({std::move(gap), {}});
          if (list.entries.size() > 4 * cfg_.d + 4) ++list.bound_violations;
        }
        list.entries[slot].indices.push_back(m);
        list.entry_of[m] = slot;
      }
      list.midpoints.push_back(m);
      ++stats_.midpoints;
    }
  });

  out.ell = out.best.length;
  stats_.checkpoints_seen = cps.size();
  // Every near-palindrome up to 2s long was seen exactly by the window, so a
  // shorter estimate is already the answer.
  if (out.ell + 1 < 2 * s_) {
    out.lists.clear();
    return out;
  }
  for (auto& cp : cps)
    if (cp.longest + s_ >= out.ell) out.checkpoints.push_back(cp);
  if (cfg_.keep_all_lists) {
    for (const auto& [c, list] : out.lists) {
      stats_.gap_entries += list.entries.size();
      stats_.bound_violations += list.bound_violations;
    }
    stats_.checkpoints_kept = out.checkpoints.size();
    return out;
  }
  std::map<u64, CandidateMidpointList> kept_lists;
  for (const auto& cp : out.checkpoints) {
    auto it = out.lists.find(cp.pos);
    if (it == out.lists.end()) continue;
    stats_.gap_entries += it->second.entries.size();
    stats_.bound_violations += it->second.bound_violations;
    kept_lists.emplace(cp.pos, std::move(it->second));
  }
  out.lists = std::move(kept_lists);
  stats_.checkpoints_kept = out.checkpoints.size();
  return out;
}

NearPalResult TwoPassEngine::recover(u64 mi, u64 mj, const CandidateMidpointList& list) const {
  NearPalResult res;
  if (mi == mj) {
    res.verdict = Verdict::accepted;
    return res;
  }
  auto a = std::lower_bound(list.midpoints.begin(), list.midpoints.end(), mi);
  auto b = std::lower_bound(list.midpoints.begin(), list.midpoints.end(), mj);
  if (a == list.midpoints.end() || *a != mi || b == list.midpoints.end() || *b != mj || mi > mj)
    throw InternalError("recover on midpoints outside the list");
  std::vector<const Bundle*> parts;
  for (auto it = a + 1; it <= b; ++it) {
    auto e = list.entry_of.find(*it);
    if (e == list.entry_of.end()) throw InternalError("missing gap fingerprint");
    parts.push_back(&list.entries[e->second].bundle);
  }
  ConcatSource src(std::move(parts), *params_);
  res = near_palindrome(src, scale_ * mi + 1, scale_ * mj, scale_ * cfg_.d);
  if (scale_ == 2) res.mismatches = undouble_indices(res.mismatches);
  return res;
}

PalindromeAnswer TwoPassEngine::second_pass(const ReplayableSource& src, const FirstPassResult& first) {
  if (src.length() != cfg_.n) throw InputError("stream length differs from the configured n");
  PalindromeAnswer best = first.best;
  const SymbolMap identity = identity_map();
  const SymbolMap& f = cfg_.pairing ? *cfg_.pairing : identity;
  const SymbolMap* pairing = cfg_.pairing ? &*cfg_.pairing : nullptr;
  const u64 ell = first.ell;
  const u64 budget = scale_ * cfg_.d;

  std::vector<u64> positions;
  std::map<u64, const CheckpointInfo*> by_pos;
  for (const auto& cp : first.checkpoints) {
    positions.push_back(cp.pos);
    by_pos[cp.pos] = &cp;
  }
  const std::vector<u64> retained = cfg_.prune_overlaps ? preprocess_checkpoints(positions, ell, s_) : positions;

  // Characters to keep: reach_ symbols ending at each retained checkpoint
  // and at each midpoint of its list.
  std::vector<std::pair<u64, u64>> want;
  std::map<u64, const CandidateMidpointList*> midpoint_owner;
  auto need = [&](u64 end) {
    if (end == 0) return;
    want.emplace_back(end >= reach_ ? end - reach_ + 1 : 1, end);
  };
  for (u64 c : retained) {
    need(c);
    auto it = first.lists.find(c);
    if (it == first.lists.end()) continue;
    for (u64 m : it->second.midpoints) {
      need(m);
      midpoint_owner[m] = &it->second;
    }
  }
  std::sort(want.begin(), want.end());
  std::size_t cursor = 0;
  std::unordered_map<u64, std::uint8_t> buf;

  struct Tracker {
    u64 lo, hi;
    std::vector<u64> mm;
  };
  std::vector<Tracker> active;
  MasterFingerprints master(params_);
  u64 x = 0;

  auto spawn = [&](u64 lo, u64 hi, std::vector<u64> mm) {
    consider(best, lo, hi - lo + 1, mm);
    active.push_back({lo, hi, std::move(mm)});
  };

  src.replay([&](std::uint8_t sym) {
    ++x;
    for (u64 t = 0; t < scale_; ++t) master.append(sym, pairing);
    const Snapshot now = master.snapshot();
    while (cursor < want.size() && want[cursor].second < x) ++cursor;
    for (std::size_t i = cursor; i < want.size() && want[i].first <= x; ++i) {
      if (want[i].second >= x) {
        buf[x] = sym;
        break;
      }
    }
    stats_.peak_buffer = std::max<u64>(stats_.peak_buffer, buf.size());

    // Extend live candidates by one symbol on each side.
    std::vector<Tracker> next;
    for (auto& t : active) {
      const u64 left = t.lo - 1;
      auto it = left >= 1 ? buf.find(left) : buf.end();
      if (it == buf.end()) continue;
      if (it->second != f[sym]) {
        if (t.mm.size() + 2 > cfg_.d) continue;
        t.mm.push_back(left);
        t.mm.push_back(x);
        std::sort(t.mm.begin(), t.mm.end());
      }
      t.lo = left;
      t.hi = x;
      consider(best, t.lo, t.hi - t.lo + 1, t.mm);
      next.push_back(std::move(t));
    }
    active = std::move(next);

    for (u64 c : retained) {
      if (c >= x) continue;
      const u64 L = x - c;
      if (!cfg_.doubling && L % 2) continue;
      if (L + 2 * h_ < ell || L > ell + 2 * h_) continue;
      ++stats_.nearpal_calls;
      auto r = near_palindrome(scale_ * c + 1, scale_ * x, by_pos[c]->snap, now, budget);
      stats_.crt_dropped += r.dropped;
      if (r.verdict != Verdict::accepted) continue;
      spawn(c + 1, x, scale_ == 2 ? undouble_indices(r.mismatches) : r.mismatches);
    }

    if (auto it = midpoint_owner.find(x); it != midpoint_owner.end()) {
      const CandidateMidpointList& list = *it->second;
      for (u64 mi : list.midpoints) {
        if (mi >= x) break;
        if (x - mi + 2 * h_ < ell) continue;
        ++stats_.recover_calls;
        auto r = recover(mi, x, list);
        stats_.crt_dropped += r.dropped;
        if (r.verdict == Verdict::accepted) spawn(mi + 1, x, std::move(r.mismatches));
      }
    }
  });

  best.mode = Mode::exact;
  best.d = cfg_.d;
  best.P = params_->P;
  best.B = params_->B;
  best.seed = cfg_.seed;
  return best;
}

PalindromeAnswer TwoPassEngine::run(const ReplayableSource& src) {
  auto first = first_pass(src);
  return second_pass(src, first);
}

}  // namespace nearpal
