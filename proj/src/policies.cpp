#include "etcb/policies.hpp"

#include <algorithm>
#include <cmath>

#include "etcb/errors.hpp"

namespace etcb {

int argmax_lowest_index(const std::vector<double>& scores) {
  if (scores.empty()) throw InputError("cannot take argmax of an empty score vector");
  int best = 0;
  for (int i = 1; i < static_cast<int>(scores.size()); ++i)
    if (scores[i] > scores[best]) best = i;
  return best;
}

int argmin_lowest_index(const std::vector<double>& scores) {
  if (scores.empty()) throw InputError("cannot take argmin of an empty score vector");
  int best = 0;
  for (int i = 1; i < static_cast<int>(scores.size()); ++i)
    if (scores[i] < scores[best]) best = i;
  return best;
}

PolicyDecision ote_mab(const ExplorationLog& log, bool paired, std::optional<double> threshold) {
  if (paired && threshold)
    throw InputError("threshold is only supported by the independent estimator");
  WinProbabilities estimate =
      paired ? estimate_ote_paired(log) : estimate_ote_independent(log, threshold);
  PolicyDecision decision;
  decision.scores = estimate.values;
  decision.chosen_arm = argmax_lowest_index(decision.scores);
  decision.policy = paired ? "ote-mab-paired" : "ote-mab";
  return decision;
}

PolicyDecision fte_mab(const ExplorationLog& log, int m, bool paired,
                       std::optional<std::uint64_t> budget, std::uint64_t cap,
                       std::uint64_t subset_seed) {
  WinProbabilities estimate = estimate_fte(log, m, paired, budget, cap, subset_seed);
  PolicyDecision decision;
  decision.scores = estimate.values;
  decision.chosen_arm = argmax_lowest_index(decision.scores);
  decision.policy = paired ? "fte-mab-paired" : "fte-mab";
  return decision;
}

PolicyDecision ucb1_commit(const BanditModel& model, std::int64_t total_pulls, Rng& rng,
                           std::vector<std::int64_t>* pull_counts) {
  const int arms = model.arm_count();
  if (total_pulls < arms)
    throw InputError("ucb1 needs at least one pull per arm (total_pulls >= K)");
  std::vector<std::int64_t> pulls(arms, 0);
  std::vector<double> sums(arms, 0.0);
  for (std::int64_t t = 1; t <= total_pulls; ++t) {
    int arm;
    if (t <= arms) {
      arm = static_cast<int>(t - 1);  // initialization round: each arm once
    } else {
      const double log_t = std::log(static_cast<double>(t));
      std::vector<double> index(arms);
      for (int i = 0; i < arms; ++i)
        index[i] = sums[i] / static_cast<double>(pulls[i]) +
                   std::sqrt(2.0 * log_t / static_cast<double>(pulls[i]));
      arm = argmax_lowest_index(index);
    }
    sums[arm] += model.arms[arm].sample(rng);
    ++pulls[arm];
  }
  PolicyDecision decision;
  decision.scores.resize(arms);
  for (int i = 0; i < arms; ++i) decision.scores[i] = sums[i] / static_cast<double>(pulls[i]);
  decision.chosen_arm = argmax_lowest_index(decision.scores);
  decision.policy = "ucb1";
  if (pull_counts) *pull_counts = pulls;
  return decision;
}

PolicyDecision expexp(const ExplorationLog& log, double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw InputError("rho must be finite and >= 0");
  if (log.rows() < 2) throw InputError("mean-variance scoring needs at least two rows");
  const std::size_t n = log.rows();
  PolicyDecision decision;
  decision.scores.resize(log.arms());
  for (std::size_t k = 0; k < log.arms(); ++k) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += log.at(r, k);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double d = log.at(r, k) - mean;
      ss += d * d;
    }
    const double variance = ss / static_cast<double>(n - 1);
    decision.scores[k] = variance - rho * mean;
  }
  decision.chosen_arm = argmin_lowest_index(decision.scores);
  decision.policy = "expexp";
  decision.hyper = rho;
  return decision;
}

PolicyDecision marab_commit(const ExplorationLog& log, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  const std::size_t n = log.rows();
  const double raw = alpha * static_cast<double>(n);
  std::size_t q = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  q = std::clamp<std::size_t>(q, 1, n);
  PolicyDecision decision;
  decision.scores.resize(log.arms());
  std::vector<double> column;
  for (std::size_t k = 0; k < log.arms(); ++k) {
    column = log.arm_column(k);
    std::nth_element(column.begin(), column.begin() + (q - 1), column.end());
    // mean of the q smallest samples = empirical alpha-tail expectation
    double tail = 0.0;
    for (std::size_t i = 0; i < q; ++i) tail += column[i];
    decision.scores[k] = tail / static_cast<double>(q);
  }
  decision.chosen_arm = argmax_lowest_index(decision.scores);
  decision.policy = "marab";
  decision.hyper = alpha;
  return decision;
}

}  // namespace etcb
