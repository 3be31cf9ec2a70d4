#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "etcb/win_probabilities.hpp"

namespace etcb {

// N simultaneous exploration rounds of K arms. `paired` records whether rows
// are matched draws (required by the paired estimators); the independent
// estimators ignore it.
class ExplorationLog {
 public:
  ExplorationLog(std::size_t rows, std::size_t arms, std::vector<double> row_major,
                 bool paired);
  static ExplorationLog from_rows(const std::vector<std::vector<double>>& rows, bool paired);

  std::size_t rows() const { return rows_; }
  std::size_t arms() const { return arms_; }
  bool paired() const { return paired_; }
  double at(std::size_t row, std::size_t arm) const { return data_[row * arms_ + arm]; }
  std::vector<double> arm_column(std::size_t arm) const;

 private:
  std::size_t rows_ = 0;
  std::size_t arms_ = 0;
  bool paired_ = false;
  std::vector<double> data_;  // row-major [row * arms + arm]
};

// --- Win-probability estimators -------------------------------------------
//
// Independent mode treats the N^K cross-product of per-arm samples as the
// comparison population. The naive enumeration is collapsed by a rank-counting
// identity: the number of tuples in which arm k's value r is the weak maximum
// equals prod_{j != k} #{values of arm j <= r}, so each arm costs one sort plus
// N binary searches per rival — O(K^2 N log N) total — and the tuple counts are
// exact integers (128-bit accumulation).
//
// `threshold` appends a constant c to every comparison: arm k's value must
// also satisfy r >= c to win a tuple (win-or-exceed-threshold probability).

WinProbabilities estimate_ote_independent(const ExplorationLog& log,
                                          std::optional<double> threshold = std::nullopt);

// Paired mode compares matched rows only: p_hat[k] = #{rows where arm k is the
// row's weak maximum} / N. Requires log.paired().
WinProbabilities estimate_ote_paired(const ExplorationLog& log);

// All C(N, M) per-arm sums over M-element row subsets, every arm using the
// same canonical subset enumeration (index sets in lexicographic order).
struct MSumSet {
  std::size_t arms = 0;
  std::uint64_t combos = 0;   // C(N, M)
  int m = 1;
  std::vector<double> sums;   // arm-major: sums[arm * combos + subset_index]
};

// The subset at a given lexicographic position, as ascending row indices.
std::vector<std::size_t> nth_subset_lex(std::size_t n, std::size_t m, std::uint64_t index);

// C(n, m) if it is <= cap, otherwise a CapacityError telling the caller to use
// the budgeted sampled estimator.
std::uint64_t binomial_within_cap(std::size_t n, std::size_t m, std::uint64_t cap);

inline constexpr std::uint64_t kDefaultComboCap = 1'000'000;

MSumSet build_m_sums(const ExplorationLog& log, int m, std::uint64_t cap = kDefaultComboCap);

// Win-probability estimates for length-m exploitation: the OTE estimators
// applied to the M-sum population. When C(N, M) exceeds `cap` and a budget is
// given, that many uniformly drawn subset tuples replace full enumeration
// (method = kIndependentSampled, std_errors filled); without a budget the
// overflow is a CapacityError. `subset_seed` makes the sampled design
// reproducible; callers wanting independent designs pass distinct seeds.
WinProbabilities estimate_fte(const ExplorationLog& log, int m, bool paired,
                              std::optional<std::uint64_t> budget = std::nullopt,
                              std::uint64_t cap = kDefaultComboCap,
                              std::uint64_t subset_seed = 0x5eed5eedULL);

// --- Exploration-size calculators ------------------------------------------
//
// Smallest N with N >= 2 ln(2K / epsilon_r) / delta_p^2 (single-round
// exploitation), and smallest N with floor(N / M) >= the same bound (length-M
// exploitation; i.e. M times the single-round answer).

std::int64_t sample_size_ote(int arms, double epsilon_r, double delta_p);
std::int64_t sample_size_fte(int arms, double epsilon_r, double delta_p, int m);

}  // namespace etcb
