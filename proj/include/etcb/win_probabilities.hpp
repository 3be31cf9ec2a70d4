#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace etcb {

// 128-bit unsigned accumulator for exact tuple counts (GCC/Clang builtin).
using u128 = unsigned __int128;

enum class EstimateMethod {
  kIndependentExact,    // full enumeration over per-arm value tuples
  kIndependentSampled,  // uniform subset-tuple sampling under a budget
  kPaired,              // matched rows/columns
};

std::string to_string(EstimateMethod method);

// Per-arm estimates (or oracle values) of the probability that each arm's
// (summed) reward weakly dominates every rival's. Ties credit every tied arm,
// so the values may sum to slightly more than 1; with no ties they sum to
// exactly 1 (integer-count identity for the exact methods).
struct WinProbabilities {
  std::vector<double> values;            // one entry per arm, each in [0, 1]
  int m = 1;                             // exploitation length the values refer to
  EstimateMethod method = EstimateMethod::kIndependentExact;
  std::uint64_t samples_used = 0;        // per-arm comparison values (exact) or draws (sampled)
  std::vector<double> std_errors;        // per-arm standard errors; empty for exact methods

  // Exact tuple accounting, populated by the exact estimators so callers can
  // compare results without floating-point tolerance: values[k] =
  // counts[k] / denominator.
  std::vector<u128> counts;
  u128 denominator = 0;
};

}  // namespace etcb
