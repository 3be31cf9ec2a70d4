#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "etcb/arms.hpp"
#include "etcb/estimators.hpp"

namespace etcb {

struct PolicyDecision {
  int chosen_arm = 0;              // index in [0, K)
  std::vector<double> scores;      // per-arm values the policy ranked on
  std::string policy;              // tag, e.g. "ote-mab"
  std::optional<double> hyper;     // rho / alpha when the policy has one
};

// Highest score wins; exact ties go to the lowest index.
int argmax_lowest_index(const std::vector<double>& scores);
// Lowest score wins; exact ties go to the lowest index.
int argmin_lowest_index(const std::vector<double>& scores);

// Commit to the arm with the highest estimated single-round win probability.
// paired = false uses the independent estimator (threshold optionally appended
// per the threshold-win variant); paired = true uses the matched-row estimator
// (no threshold support).
PolicyDecision ote_mab(const ExplorationLog& log, bool paired,
                       std::optional<double> threshold = std::nullopt);

// Commit to the arm with the highest estimated length-m win probability.
PolicyDecision fte_mab(const ExplorationLog& log, int m, bool paired,
                       std::optional<std::uint64_t> budget = std::nullopt,
                       std::uint64_t cap = kDefaultComboCap,
                       std::uint64_t subset_seed = 0x5eed5eedULL);

// Classic optimistic index play for total_pulls rounds (each arm once, then
// argmax of mean + sqrt(2 ln t / n_i)), committing to the best empirical mean.
// Equal-information baseline: total_pulls should be N * K. pull_counts, when
// non-null, receives the per-arm pull tally.
PolicyDecision ucb1_commit(const BanditModel& model, std::int64_t total_pulls, Rng& rng,
                           std::vector<std::int64_t>* pull_counts = nullptr);

// Mean-variance baseline: minimize unbiased sample variance - rho * sample
// mean over the shared log (needs N >= 2).
PolicyDecision expexp(const ExplorationLog& log, double rho);

// Empirical-tail baseline: maximize the mean of the ceil(alpha * N) smallest
// samples of each arm (alpha in (0, 1)).
PolicyDecision marab_commit(const ExplorationLog& log, double alpha);

}  // namespace etcb
