#include "etcb/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "etcb/errors.hpp"
#include "etcb/policies.hpp"

#include "json.hpp"

namespace etcb {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& origin, const std::string& message) {
  throw InputError(origin + ": " + message);
}

const json& require_key(const json& object, const char* key, const std::string& origin) {
  auto it = object.find(key);
  if (it == object.end()) config_error(origin, std::string("missing key '") + key + "'");
  return *it;
}

void reject_unknown_keys(const json& object, std::initializer_list<const char*> known,
                         const std::string& origin) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok) config_error(origin, "unknown key '" + it.key() + "'");
  }
}

double as_number(const json& value, const char* key, const std::string& origin) {
  if (!value.is_number()) config_error(origin, std::string("'") + key + "' must be a number");
  return value.get<double>();
}

std::int64_t as_integer(const json& value, const char* key, const std::string& origin) {
  if (!value.is_number_integer() && !value.is_number_unsigned())
    config_error(origin, std::string("'") + key + "' must be an integer");
  return value.get<std::int64_t>();
}

ArmComponent parse_component(const json& j, const std::string& origin) {
  if (!j.is_object()) config_error(origin, "components must be objects");
  const json& kind_json = require_key(j, "kind", origin);
  if (!kind_json.is_string()) config_error(origin, "'kind' must be a string");
  const std::string kind = kind_json.get<std::string>();
  ArmComponent component;
  if (kind == "truncated-gaussian") {
    reject_unknown_keys(j, {"kind", "weight", "mean", "scale"}, origin);
    component.kind = ArmComponent::Kind::kTruncatedGaussian;
    component.weight = as_number(require_key(j, "weight", origin), "weight", origin);
    component.mean = as_number(require_key(j, "mean", origin), "mean", origin);
    component.scale = as_number(require_key(j, "scale", origin), "scale", origin);
  } else if (kind == "uniform") {
    reject_unknown_keys(j, {"kind", "weight"}, origin);
    component.kind = ArmComponent::Kind::kUniform;
    component.weight = as_number(require_key(j, "weight", origin), "weight", origin);
  } else {
    config_error(origin, "unknown component kind '" + kind +
                             "' (expected 'truncated-gaussian' or 'uniform')");
  }
  return component;
}

BanditModel parse_model(const json& j, const std::string& origin) {
  if (!j.is_object()) config_error(origin, "'model' must be an object");
  reject_unknown_keys(j, {"label", "arms"}, origin);
  std::string label = "config-model";
  if (auto it = j.find("label"); it != j.end()) {
    if (!it->is_string()) config_error(origin, "'label' must be a string");
    label = it->get<std::string>();
  }
  const json& arms_json = require_key(j, "arms", origin);
  if (!arms_json.is_array() || arms_json.size() < 2)
    config_error(origin, "'arms' must be an array of at least two arms");
  std::vector<ArmDistribution> arms;
  arms.reserve(arms_json.size());
  for (std::size_t a = 0; a < arms_json.size(); ++a) {
    const json& arm_json = arms_json[a];
    const std::string arm_origin = origin + " (arm " + std::to_string(a) + ")";
    if (!arm_json.is_object()) config_error(arm_origin, "arm entries must be objects");
    reject_unknown_keys(arm_json, {"components", "support"}, arm_origin);
    const json& support = require_key(arm_json, "support", arm_origin);
    if (!support.is_array() || support.size() != 2)
      config_error(arm_origin, "'support' must be [lo, hi]");
    const double lo = as_number(support[0], "support", arm_origin);
    const double hi = as_number(support[1], "support", arm_origin);
    const json& comps_json = require_key(arm_json, "components", arm_origin);
    if (!comps_json.is_array() || comps_json.empty())
      config_error(arm_origin, "'components' must be a non-empty array");
    std::vector<ArmComponent> components;
    components.reserve(comps_json.size());
    for (const json& c : comps_json) components.push_back(parse_component(c, arm_origin));
    try {
      arms.emplace_back(std::move(components), lo, hi);
    } catch (const InputError& e) {
      config_error(arm_origin, e.what());
    }
  }
  return BanditModel(std::move(arms), std::move(label));
}

enum class PolicyKind { kOte, kOtePaired, kFte, kFtePaired, kUcb1, kExpExp, kMarab };

struct CompiledPolicy {
  PolicyKind kind = PolicyKind::kOte;
  std::string name;
  std::optional<double> rho;
  std::optional<double> alpha;
  std::optional<std::uint64_t> budget;
  std::optional<double> hyper;  // the value reported in the CSV hyper column
};

CompiledPolicy compile_policy(const PolicySpec& spec, const std::string& origin) {
  CompiledPolicy policy;
  policy.name = spec.name;
  auto forbid = [&](bool present, const char* what) {
    if (present)
      config_error(origin, "policy '" + spec.name + "' does not take " + what);
  };
  if (spec.name == "ote-mab" || spec.name == "ote-mab-paired") {
    policy.kind = spec.name == "ote-mab" ? PolicyKind::kOte : PolicyKind::kOtePaired;
    forbid(spec.rho.has_value(), "rho");
    forbid(spec.alpha.has_value(), "alpha");
    forbid(spec.budget.has_value(), "budget");
  } else if (spec.name == "fte-mab" || spec.name == "fte-mab-paired") {
    policy.kind = spec.name == "fte-mab" ? PolicyKind::kFte : PolicyKind::kFtePaired;
    forbid(spec.rho.has_value(), "rho");
    forbid(spec.alpha.has_value(), "alpha");
    policy.budget = spec.budget;
  } else if (spec.name == "ucb1") {
    policy.kind = PolicyKind::kUcb1;
    forbid(spec.rho.has_value(), "rho");
    forbid(spec.alpha.has_value(), "alpha");
    forbid(spec.budget.has_value(), "budget");
  } else if (spec.name == "expexp") {
    policy.kind = PolicyKind::kExpExp;
    if (!spec.rho) config_error(origin, "policy 'expexp' requires rho");
    if (!(*spec.rho >= 0.0)) config_error(origin, "expexp rho must be >= 0");
    forbid(spec.alpha.has_value(), "alpha");
    forbid(spec.budget.has_value(), "budget");
    policy.rho = spec.rho;
    policy.hyper = spec.rho;
  } else if (spec.name == "marab") {
    policy.kind = PolicyKind::kMarab;
    if (!spec.alpha) config_error(origin, "policy 'marab' requires alpha");
    if (!(*spec.alpha > 0.0) || !(*spec.alpha < 1.0))
      config_error(origin, "marab alpha must lie in (0, 1)");
    forbid(spec.rho.has_value(), "rho");
    forbid(spec.budget.has_value(), "budget");
    policy.alpha = spec.alpha;
    policy.hyper = spec.alpha;
  } else {
    config_error(origin,
                 "unknown policy '" + spec.name +
                     "' (expected ote-mab, ote-mab-paired, fte-mab, fte-mab-paired, ucb1, "
                     "expexp, or marab)");
  }
  return policy;
}

PolicySpec parse_policy(const json& j, const std::string& origin) {
  if (!j.is_object()) config_error(origin, "policy entries must be objects");
  reject_unknown_keys(j, {"name", "rho", "alpha", "budget"}, origin);
  PolicySpec spec;
  const json& name = require_key(j, "name", origin);
  if (!name.is_string()) config_error(origin, "policy 'name' must be a string");
  spec.name = name.get<std::string>();
  if (auto it = j.find("rho"); it != j.end()) spec.rho = as_number(*it, "rho", origin);
  if (auto it = j.find("alpha"); it != j.end()) spec.alpha = as_number(*it, "alpha", origin);
  if (auto it = j.find("budget"); it != j.end()) {
    const std::int64_t b = as_integer(*it, "budget", origin);
    if (b < 1) config_error(origin, "'budget' must be >= 1");
    spec.budget = static_cast<std::uint64_t>(b);
  }
  compile_policy(spec, origin);  // reject unknown names and bad hyperparameters at load time
  return spec;
}

int resolve_threads(const ExperimentConfig& config) {
  if (const char* env = std::getenv("ETC_BANDIT_THREADS")) {
    const std::string text(env);
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || value < 1)
      throw InputError("ETC_BANDIT_THREADS must be a positive integer, got '" + text + "'");
    return value;
  }
  if (config.threads) {
    if (*config.threads < 1) throw InputError("config threads must be >= 1");
    return *config.threads;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

struct Tally {
  std::uint64_t wrong = 0;       // committed arm != oracle-best arm
  std::uint64_t gap_missed = 0;  // oracle win-probability gap >= delta_p
  std::uint64_t fresh_win = 0;   // committed arm strictly won the fresh draw
};

}  // namespace

ExperimentConfig parse_config_json(const std::string& json_text, const std::string& origin) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(origin + ": malformed JSON: " + e.what());
  }
  if (!root.is_object()) config_error(origin, "top level must be an object");
  reject_unknown_keys(
      root, {"model", "n_grid", "replications", "m", "policies", "seed", "delta_p", "threads"},
      origin);

  ExperimentConfig config;
  config.model = parse_model(require_key(root, "model", origin), origin + " (model)");

  const json& n_grid = require_key(root, "n_grid", origin);
  if (!n_grid.is_array() || n_grid.empty())
    config_error(origin, "'n_grid' must be a non-empty array");
  for (const json& v : n_grid) config.n_grid.push_back(as_integer(v, "n_grid", origin));

  config.replications =
      static_cast<std::uint64_t>(as_integer(require_key(root, "replications", origin),
                                            "replications", origin));
  const std::int64_t m = as_integer(require_key(root, "m", origin), "m", origin);
  if (m < 1) config_error(origin, "'m' must be >= 1");
  config.m = static_cast<int>(m);

  const json& policies = require_key(root, "policies", origin);
  if (!policies.is_array() || policies.empty())
    config_error(origin, "'policies' must be a non-empty array");
  for (std::size_t i = 0; i < policies.size(); ++i)
    config.policies.push_back(
        parse_policy(policies[i], origin + " (policy " + std::to_string(i) + ")"));

  const json& seed = require_key(root, "seed", origin);
  if (!seed.is_number_integer() && !seed.is_number_unsigned())
    config_error(origin, "'seed' must be an integer");
  config.master_seed = seed.get<std::uint64_t>();

  if (auto it = root.find("delta_p"); it != root.end()) {
    const double dp = as_number(*it, "delta_p", origin);
    if (!(dp > 0.0) || !(dp <= 1.0)) config_error(origin, "'delta_p' must lie in (0, 1]");
    config.delta_p = dp;
  }
  if (auto it = root.find("threads"); it != root.end()) {
    const std::int64_t t = as_integer(*it, "threads", origin);
    if (t < 1) config_error(origin, "'threads' must be >= 1");
    config.threads = static_cast<int>(t);
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str(), path);
}

RegretCurve run_experiment(const ExperimentConfig& config,
                           const std::function<void(std::size_t, std::size_t)>& progress) {
  const std::string origin = "experiment config";
  if (config.n_grid.empty()) config_error(origin, "'n_grid' must be non-empty");
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    if (config.n_grid[i] < 1) config_error(origin, "'n_grid' entries must be >= 1");
    if (i > 0 && config.n_grid[i] <= config.n_grid[i - 1])
      config_error(origin, "'n_grid' must be strictly ascending");
  }
  if (config.replications < 1) config_error(origin, "'replications' must be >= 1");
  if (config.m < 1) config_error(origin, "'m' must be >= 1");
  if (config.policies.empty()) config_error(origin, "'policies' must be non-empty");

  std::vector<CompiledPolicy> policies;
  policies.reserve(config.policies.size());
  for (std::size_t i = 0; i < config.policies.size(); ++i)
    policies.push_back(
        compile_policy(config.policies[i], origin + " (policy " + std::to_string(i) + ")"));

  const std::int64_t smallest_n = config.n_grid.front();
  for (const CompiledPolicy& p : policies) {
    const bool needs_subsets = p.kind == PolicyKind::kFte || p.kind == PolicyKind::kFtePaired;
    if (needs_subsets && smallest_n < config.m)
      config_error(origin, "'m' exceeds the smallest n_grid entry, so the subset estimators "
                           "cannot run");
    if (p.kind == PolicyKind::kExpExp && smallest_n < 2)
      config_error(origin, "expexp needs n >= 2 for its variance estimate");
  }

  const int threads = resolve_threads(config);
  const int arm_count = config.model.arm_count();

  OracleOptions oracle_options;
  oracle_options.threads = threads;
  RegretCurve curve;
  curve.oracle = win_probability_oracle(config.model, config.m, oracle_options);
  curve.best_arm = argmax_lowest_index(curve.oracle.values);
  for (int k = 0; k < arm_count; ++k)
    if (k != curve.best_arm && curve.oracle.values[k] == curve.oracle.values[curve.best_arm])
      std::cerr << "warning: oracle win probabilities tie between arms " << curve.best_arm
                << " and " << k << "; regrets score against arm " << curve.best_arm << "\n";

  const std::uint64_t replications = config.replications;
  const double delta_p = config.delta_p.value_or(0.0);
  const bool track_delta = config.delta_p.has_value();

  for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
    const std::int64_t n = config.n_grid[ni];
    const int workers =
        static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(threads),
                                                 replications));
    std::vector<std::vector<Tally>> worker_tallies(
        workers, std::vector<Tally>(policies.size()));
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto run_range = [&](int worker, std::uint64_t begin, std::uint64_t end) {
      try {
        auto& tallies = worker_tallies[worker];
        std::vector<double> fresh(arm_count);
        for (std::uint64_t rep = begin; rep < end; ++rep) {
          const std::uint64_t seed = derive_replication_seed(config.master_seed, ni, rep);

          // Stream 0: the shared exploration log (row-major simultaneous draws).
          Rng log_rng(derive_stream_seed(seed, 0));
          std::vector<double> rewards(static_cast<std::size_t>(n) * arm_count);
          for (std::int64_t r = 0; r < n; ++r)
            for (int k = 0; k < arm_count; ++k)
              rewards[static_cast<std::size_t>(r) * arm_count + k] =
                  config.model.arms[k].sample(log_rng);
          const ExplorationLog log(static_cast<std::size_t>(n), arm_count, std::move(rewards),
                                   /*paired=*/true);

          // Stream 1: one fresh evaluation draw (length-m sums), shared by all
          // policies in this replication.
          Rng fresh_rng(derive_stream_seed(seed, 1));
          std::fill(fresh.begin(), fresh.end(), 0.0);
          for (int i = 0; i < config.m; ++i)
            for (int k = 0; k < arm_count; ++k)
              fresh[k] += config.model.arms[k].sample(fresh_rng);

          for (std::size_t pi = 0; pi < policies.size(); ++pi) {
            const CompiledPolicy& policy = policies[pi];
            PolicyDecision decision;
            switch (policy.kind) {
              case PolicyKind::kOte:
                decision = ote_mab(log, /*paired=*/false);
                break;
              case PolicyKind::kOtePaired:
                decision = ote_mab(log, /*paired=*/true);
                break;
              case PolicyKind::kFte:
              case PolicyKind::kFtePaired: {
                // Streams 0 and 1 are taken; each policy owns stream 2 + pi.
                const std::uint64_t subset_seed = derive_stream_seed(seed, 2 + pi);
                decision = fte_mab(log, config.m, policy.kind == PolicyKind::kFtePaired,
                                   policy.budget, kDefaultComboCap, subset_seed);
                break;
              }
              case PolicyKind::kUcb1: {
                Rng ucb_rng(derive_stream_seed(seed, 2 + pi));
                decision = ucb1_commit(config.model, n * arm_count, ucb_rng);
                break;
              }
              case PolicyKind::kExpExp:
                decision = expexp(log, *policy.rho);
                break;
              case PolicyKind::kMarab:
                decision = marab_commit(log, *policy.alpha);
                break;
            }

            Tally& tally = tallies[pi];
            if (decision.chosen_arm != curve.best_arm) ++tally.wrong;
            if (track_delta) {
              const double gap = curve.oracle.values[curve.best_arm] -
                                 curve.oracle.values[decision.chosen_arm];
              if (gap >= delta_p) ++tally.gap_missed;
            }
            bool strict_win = true;
            for (int k = 0; k < arm_count; ++k) {
              if (k == decision.chosen_arm) continue;
              if (fresh[k] >= fresh[decision.chosen_arm]) {
                strict_win = false;
                break;
              }
            }
            if (strict_win) ++tally.fresh_win;
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    };

    if (workers == 1) {
      run_range(0, 0, replications);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (int w = 0; w < workers; ++w) {
        const std::uint64_t begin = replications * static_cast<std::uint64_t>(w) / workers;
        const std::uint64_t end = replications * (static_cast<std::uint64_t>(w) + 1) / workers;
        pool.emplace_back(run_range, w, begin, end);
      }
      for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t pi = 0; pi < policies.size(); ++pi) {
      Tally total;
      for (const auto& tallies : worker_tallies) {
        total.wrong += tallies[pi].wrong;
        total.gap_missed += tallies[pi].gap_missed;
        total.fresh_win += tallies[pi].fresh_win;
      }
      const double reps = static_cast<double>(replications);
      auto rate = [reps](std::uint64_t count) { return static_cast<double>(count) / reps; };
      auto se = [reps](double p) { return std::sqrt(p * (1.0 - p) / reps); };

      RegretPoint point;
      point.policy = policies[pi].name;
      point.hyper = policies[pi].hyper;
      point.n = n;
      point.m = config.m;
      point.replications = replications;
      point.strong_regret = rate(total.wrong);
      point.strong_regret_se = se(point.strong_regret);
      if (track_delta) {
        point.delta_regret = rate(total.gap_missed);
        point.delta_regret_se = se(*point.delta_regret);
      }
      point.win_rate = rate(total.fresh_win);
      point.win_rate_se = se(point.win_rate);
      curve.points.push_back(std::move(point));
    }
    if (progress) progress(ni + 1, config.n_grid.size());
  }
  return curve;
}

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw NumericError("failed to format a double");
  return std::string(buffer, ptr);
}

namespace {

bool row_before(const RegretPoint& a, const RegretPoint& b) {
  if (a.policy != b.policy) return a.policy < b.policy;
  const double ha = a.hyper.value_or(-std::numeric_limits<double>::infinity());
  const double hb = b.hyper.value_or(-std::numeric_limits<double>::infinity());
  if (ha != hb) return ha < hb;
  return a.n < b.n;
}

}  // namespace

std::string results_to_csv(const RegretCurve& curve) {
  std::vector<RegretPoint> rows = curve.points;
  std::stable_sort(rows.begin(), rows.end(), row_before);
  std::string out =
      "policy,hyper,n,m,replications,strong_regret,strong_regret_se,delta_regret,"
      "delta_regret_se,win_rate,win_rate_se\n";
  for (const RegretPoint& row : rows) {
    out += row.policy;
    out += ',';
    if (row.hyper) out += format_double(*row.hyper);
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    out += std::to_string(row.m);
    out += ',';
    out += std::to_string(row.replications);
    out += ',';
    out += format_double(row.strong_regret);
    out += ',';
    out += format_double(row.strong_regret_se);
    out += ',';
    if (row.delta_regret) out += format_double(*row.delta_regret);
    out += ',';
    if (row.delta_regret_se) out += format_double(*row.delta_regret_se);
    out += ',';
    out += format_double(row.win_rate);
    out += ',';
    out += format_double(row.win_rate_se);
    out += '\n';
  }
  return out;
}

void write_results(const RegretCurve& curve, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file for writing: " + path);
  out << results_to_csv(curve);
  out.flush();
  if (!out) throw IoError("failed while writing output file: " + path);
}

}  // namespace etcb
