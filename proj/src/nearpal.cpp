#include "nearpal/nearpal.hpp"

#include <algorithm>

#include "nearpal/errors.hpp"

namespace nearpal {

bool exceeds_stage1(u64 delta, u64 budget, const FingerprintParams& params) {
  return static_cast<u128>(delta) * params.beta_den >
         static_cast<u128>(budget) * (params.beta_den + params.beta_num);
}

namespace {

// True when class r agrees with the reversal of its mirror class.
bool mirrored_equal(const ClassSource& src, std::size_t family, u64 r, u64 m, u64 c, u64 x,
                    const FingerprintParams& pr) {
  const u64 rb = mirror_class(r, m, c, x);
  const ClassFingerprint a = src.cls(family, r);
  const ClassFingerprint b = rb == r ? a : src.cls(family, rb);
  if (a.count != b.count) throw InternalError("mirrored classes differ in length");
  return a.forward == pr.mul(pr.pow_B(a.count + 1), b.reverse);
}

}  // namespace

DeltaResult delta_statistic(const ClassSource& src, u64 c, u64 x, const FingerprintParams& params,
                            const u64* stop_when_exceeding) {
  DeltaResult out;
  const std::size_t np = params.num_first();
  out.per_prime.assign(np, 0);
  out.differing.assign(np, {});
  if (x < c) return out;
  for (std::size_t j = 0; j < np; ++j) {
    const u64 p = params.first_level[j];
    const u64 last = x - c + 1 > p ? c + p - 1 : x;
    u64 count = 0;
    // outermost positions first: their classes are the likeliest to disagree
    for (u64 i = c; i <= last; ++i) {
      const u64 r = i % p;
      if (!mirrored_equal(src, j, r, p, c, x, params)) {
        ++count;
        out.differing[j].push_back(r);
        if (stop_when_exceeding && exceeds_stage1(count, *stop_when_exceeding, params)) {
          out.stopped_early = true;
          break;
        }
      }
    }
    out.per_prime[j] = count;
    out.delta = std::max(out.delta, count);
    if (out.stopped_early) break;
  }
  return out;
}

std::vector<u64> isolated_mismatches(const ClassSource& src, u64 c, u64 x,
                                     const FingerprintParams& params, const DeltaResult& delta,
                                     u64* dropped) {
  std::vector<u64> found;
  u64 drops = 0;
  const auto& qs = params.second_level;
  for (std::size_t j = 0; j < params.num_first() && j < delta.differing.size(); ++j) {
    const u64 p = params.first_level[j];
    for (u64 r : delta.differing[j]) {
      const bool self_mirrored = mirror_class(r, p, c, x) == r;
      const u64 first = c + (r + p - c % p) % p;
      if (first > x) continue;
      std::vector<std::pair<u64, u64>> residues{{r, p}};
      bool isolated = true;
      for (std::size_t k = 0; k < qs.size() && isolated; ++k) {
        const u64 q = qs[k];
        const u64 M = p * q;
        const std::size_t fam = params.second_family(j, k);
        u64 fails = 0, failing = 0;
        u64 i = first;
        for (u64 t = 0; t < q && i <= x; ++t, i += p) {
          const u64 r2 = i % M;
          if (!mirrored_equal(src, fam, r2, M, c, x, params)) {
            ++fails;
            failing = r2;
          }
        }
        // A self-mirrored class is only resolved when the lone mismatch is its
        // own mirror (an odd-length center); mirrored pairs inside one class
        // are left to the other primes.
        if (fails != 1 || (self_mirrored && mirror_class(failing, M, c, x) != failing)) {
          isolated = false;
          break;
        }
        if (q != p) residues.emplace_back(failing % q, q);
      }
      if (!isolated) continue;
      // Combine just enough moduli to exceed n_bound, then check the rest.
      std::size_t used = 0;
      u128 prod = 1;
      while (used < residues.size() && prod <= params.n_bound) {
        prod *= residues[used].second;
        ++used;
      }
      if (prod <= params.n_bound) {
        ++drops;
        continue;
      }
      const u64 idx = crt_combine({residues.begin(), residues.begin() + used});
      bool consistent = true;
      for (std::size_t t = used; t < residues.size(); ++t)
        if (idx % residues[t].second != residues[t].first) consistent = false;
      if (!consistent || idx < c || idx > x) {
        ++drops;
        continue;
      }
      found.push_back(idx);
    }
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  std::vector<u64> out;
  for (u64 i : found) {
    const u64 mirror = c + x - i;
    if (std::binary_search(found.begin(), found.end(), mirror))
      out.push_back(i);
    else
      ++drops;
  }
  if (dropped) *dropped += drops;
  return out;
}

NearPalResult near_palindrome(const ClassSource& src, u64 c, u64 x, u64 budget) {
  const auto& params = src.params();
  NearPalResult res;
  const DeltaResult dr = delta_statistic(src, c, x, params, &budget);
  res.delta = dr.delta;
  if (exceeds_stage1(dr.delta, budget, params)) {
    res.verdict = Verdict::rejected_stage1;
    return res;
  }
  auto found = isolated_mismatches(src, c, x, params, dr, &res.dropped);
  if (found.size() > budget) {
    res.verdict = Verdict::rejected_stage2;
    return res;
  }
  res.verdict = Verdict::accepted;
  res.mismatches = std::move(found);
  return res;
}

NearPalResult near_palindrome(u64 c, u64 x, const Snapshot& snapshot_c, const Snapshot& master_x,
                              u64 budget) {
  if (snapshot_c.pos + 1 != c || master_x.pos != x)
    throw InternalError("snapshot positions do not bracket the substring");
  SlicedSource src(snapshot_c, master_x);
  return near_palindrome(src, c, x, budget);
}

}  // namespace nearpal
