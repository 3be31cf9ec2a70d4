#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "etcb/arms.hpp"
#include "etcb/win_probabilities.hpp"

namespace etcb {

// One policy entry of an experiment. Recognized names:
//   "ote-mab"         independent single-round win-probability commit
//   "ote-mab-paired"  matched-row variant
//   "fte-mab"         independent length-m variant (optional subset budget)
//   "fte-mab-paired"  matched-subset variant (optional subset budget)
//   "ucb1"            optimistic index play with an N*K pull budget
//   "expexp"          mean-variance commit; requires rho
//   "marab"           empirical-tail commit; requires alpha in (0, 1)
struct PolicySpec {
  std::string name;
  std::optional<double> rho;
  std::optional<double> alpha;
  std::optional<std::uint64_t> budget;
};

struct ExperimentConfig {
  BanditModel model{std::vector<ArmDistribution>{ArmDistribution::uniform(0.0, 1.0),
                                                 ArmDistribution::uniform(0.0, 1.0)},
                    "unnamed"};
  std::vector<std::int64_t> n_grid;       // exploration sizes, strictly ascending
  std::uint64_t replications = 0;
  int m = 1;
  std::vector<PolicySpec> policies;
  std::uint64_t master_seed = 0;
  std::optional<double> delta_p;          // enables the gap-regret column
  std::optional<int> threads;             // overridden by ETC_BANDIT_THREADS
};

// Parse / validate a JSON experiment config (see README for the schema).
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_json(const std::string& json_text, const std::string& origin);

struct RegretPoint {
  std::string policy;
  std::optional<double> hyper;
  std::int64_t n = 0;
  int m = 1;
  std::uint64_t replications = 0;
  double strong_regret = 0.0;     // P(committed arm != oracle-best arm)
  double strong_regret_se = 0.0;
  std::optional<double> delta_regret;  // P(oracle gap of committed arm >= delta_p)
  std::optional<double> delta_regret_se;
  double win_rate = 0.0;          // P(committed arm strictly wins a fresh evaluation draw)
  double win_rate_se = 0.0;
};

struct RegretCurve {
  std::vector<RegretPoint> points;
  WinProbabilities oracle;  // ground truth the regrets were scored against
  int best_arm = 0;
};

// Deterministic parallel Monte Carlo over replications: every replication's
// stream is derived from (master_seed, n-grid index, replication index), and
// per-policy tallies are integers, so the result is byte-identical for a fixed
// master seed regardless of thread count. Thread count resolution:
// ETC_BANDIT_THREADS env var > config.threads > hardware concurrency.
// `progress`, when set, is called after each n-grid point completes.
RegretCurve run_experiment(const ExperimentConfig& config,
                           const std::function<void(std::size_t done, std::size_t total)>&
                               progress = {});

// CSV with header policy,hyper,n,m,replications,strong_regret,strong_regret_se,
// delta_regret,delta_regret_se,win_rate,win_rate_se; rows sorted by (policy,
// hyper, n); floats as shortest round-trip decimals; absent optionals empty.
void write_results(const RegretCurve& curve, const std::string& path);
std::string results_to_csv(const RegretCurve& curve);

// Shortest decimal that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace etcb
