#pragma once

#include <cstdint>
#include <vector>

namespace etcb {

// Target accuracy for a selection experiment: wrong-commit probability at most
// epsilon_r against win-probability gaps of at least delta_p, for length-m
// exploitation.
struct RegretSpec {
  double delta_p = 0.1;
  double epsilon_r = 0.05;
  int m = 1;
};

// Exact wrong-commit probability of the matched-row majority vote on a two-arm
// problem where the better arm wins a matched round with probability p_star:
// the lower binomial tail in the number of won rounds, plus half the tie mass
// at even N (fair tie-break). Evaluated in log space (lgamma), N up to 1e5.
double exact_regret_two_arm(double p_star, std::int64_t n);

struct CostSpec {
  double cost_per_experiment_divisor = 5.0;  // cost(N) = N / divisor
  double tradeoff_alpha = 100.0;             // objective = cost(N) + alpha * regret(N)
  std::vector<std::int64_t> n_grid;          // strictly ascending, positive
};

struct TradeoffPoint {
  std::int64_t n = 0;
  double cost = 0.0;             // n / divisor
  double weighted_regret = 0.0;  // alpha * exact_regret_two_arm(p_star, n)
  double objective = 0.0;        // cost + weighted_regret
};

struct TradeoffCurve {
  std::int64_t n_opt = 0;  // grid argmin of the objective (lowest N on ties)
  std::vector<TradeoffPoint> points;
};

TradeoffCurve cost_regret_argmin(double p_star, const CostSpec& spec);

struct ExplorationRequirement {
  double epsilon_r = 0.0;
  std::int64_t n_min = 0;
};

// Minimal exploration size as a function of the accuracy target: one point per
// epsilon in the grid, using the single-round bound for m = 1 and the
// length-m bound otherwise.
std::vector<ExplorationRequirement> min_exploration_curve(double delta_p_star, int arms, int m,
                                                          const std::vector<double>& epsilon_grid);

struct HoeffdingInterval {
  double halfwidth = 0.0;   // a / (2 sqrt(samples))
  double confidence = 0.0;  // 1 - 2 exp(-a^2 / 2)
};

HoeffdingInterval hoeffding_halfwidth(double a, std::int64_t samples);

}  // namespace etcb
