#include "etcb/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "etcb/errors.hpp"
#include "etcb/estimators.hpp"
#include "etcb/numeric.hpp"

namespace etcb {

double exact_regret_two_arm(double p_star, std::int64_t n) {
  if (!(p_star >= 0.0) || !(p_star <= 1.0)) throw InputError("p_star must lie in [0, 1]");
  if (n < 1) throw InputError("exploration size n must be >= 1");
  constexpr std::int64_t kMaxN = 100'000;
  if (n > kMaxN)
    throw CapacityError("exact regret supports n up to " + std::to_string(kMaxN));

  // Majority vote over n matched rounds: losing needs more than n/2 lost
  // rounds; exactly n/2 (even n) contributes half its mass.
  if (p_star == 1.0) return 0.0;
  if (p_star == 0.0) return 1.0;

  const double log_q = std::log1p(-p_star);  // log P(lose a round)
  const double log_p = std::log(p_star);
  const double lgamma_n = std::lgamma(static_cast<double>(n) + 1.0);
  auto log_term = [&](std::int64_t i) {
    return lgamma_n - std::lgamma(static_cast<double>(i) + 1.0) -
           std::lgamma(static_cast<double>(n - i) + 1.0) + static_cast<double>(i) * log_q +
           static_cast<double>(n - i) * log_p;
  };

  double regret = 0.0;
  for (std::int64_t i = n / 2 + 1; i <= n; ++i) regret += std::exp(log_term(i));
  if (n % 2 == 0) regret += 0.5 * std::exp(log_term(n / 2));
  return std::clamp(regret, 0.0, 1.0);
}

TradeoffCurve cost_regret_argmin(double p_star, const CostSpec& spec) {
  if (!(spec.cost_per_experiment_divisor > 0.0))
    throw InputError("cost divisor must be positive");
  if (!(spec.tradeoff_alpha >= 0.0)) throw InputError("tradeoff alpha must be >= 0");
  if (spec.n_grid.empty()) throw InputError("tradeoff n_grid must be non-empty");
  for (std::size_t i = 0; i < spec.n_grid.size(); ++i) {
    if (spec.n_grid[i] < 1) throw InputError("tradeoff n_grid entries must be >= 1");
    if (i > 0 && spec.n_grid[i] <= spec.n_grid[i - 1])
      throw InputError("tradeoff n_grid must be strictly ascending");
  }

  TradeoffCurve curve;
  curve.points.reserve(spec.n_grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < spec.n_grid.size(); ++i) {
    TradeoffPoint point;
    point.n = spec.n_grid[i];
    point.cost = static_cast<double>(point.n) / spec.cost_per_experiment_divisor;
    point.weighted_regret = spec.tradeoff_alpha * exact_regret_two_arm(p_star, point.n);
    point.objective = point.cost + point.weighted_regret;
    curve.points.push_back(point);
    if (point.objective < curve.points[best].objective) best = i;  // ties keep the lowest n
  }
  curve.n_opt = curve.points[best].n;
  return curve;
}

std::vector<ExplorationRequirement> min_exploration_curve(double delta_p_star, int arms, int m,
                                                          const std::vector<double>& epsilon_grid) {
  if (epsilon_grid.empty()) throw InputError("epsilon grid must be non-empty");
  std::vector<ExplorationRequirement> curve;
  curve.reserve(epsilon_grid.size());
  for (double epsilon : epsilon_grid) {
    ExplorationRequirement point;
    point.epsilon_r = epsilon;
    point.n_min = (m == 1) ? sample_size_ote(arms, epsilon, delta_p_star)
                           : sample_size_fte(arms, epsilon, delta_p_star, m);
    curve.push_back(point);
  }
  return curve;
}

HoeffdingInterval hoeffding_halfwidth(double a, std::int64_t samples) {
  if (!(a > 0.0)) throw InputError("interval parameter a must be positive");
  if (samples < 1) throw InputError("samples must be >= 1");
  HoeffdingInterval interval;
  interval.halfwidth = a / (2.0 * std::sqrt(static_cast<double>(samples)));
  interval.confidence = 1.0 - 2.0 * std::exp(-0.5 * a * a);
  return interval;
}

}  // namespace etcb
