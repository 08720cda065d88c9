#pragma once

#include <cstdint>
#include <vector>

#include "nearpal/fingerprint.hpp"

namespace nearpal {

enum class Verdict { accepted, rejected_stage1, rejected_stage2 };

struct DeltaResult {
  u64 delta = 0;
  std::vector<u64> per_prime;                // Δ_j (partial when stopped early)
  std::vector<std::vector<u64>> differing;   // residues that failed, per prime
  bool stopped_early = false;
};

struct NearPalResult {
  Verdict verdict = Verdict::rejected_stage1;
  u64 delta = 0;
  std::vector<u64> mismatches;  // absolute 1-based, ascending; only when accepted
  u64 dropped = 0;              // CRT recoveries discarded by the sanity filter
};

// Stage-1 threshold test Δ > (1+β)·budget in exact integer arithmetic.
bool exceeds_stage1(u64 delta, u64 budget, const FingerprintParams& params);

// Mirrored-class disagreement counts over the first-level families for S[c, x].
// With stop_when_exceeding set, scanning stops once some Δ_j crosses the
// stage-1 threshold for that budget.
DeltaResult delta_statistic(const ClassSource& src, u64 c, u64 x, const FingerprintParams& params,
                            const u64* stop_when_exceeding = nullptr);

// Indices isolated by some first-level prime and recovered through CRT.
std::vector<u64> isolated_mismatches(const ClassSource& src, u64 c, u64 x,
                                     const FingerprintParams& params, const DeltaResult& delta,
                                     u64* dropped = nullptr);

NearPalResult near_palindrome(const ClassSource& src, u64 c, u64 x, u64 budget);

// Tests S[c, x] from a snapshot at c-1 and the current master.
NearPalResult near_palindrome(u64 c, u64 x, const Snapshot& snapshot_c, const Snapshot& master_x,
                              u64 budget);

}  // namespace nearpal
