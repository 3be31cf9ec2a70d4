// etcb: command-line front end for the explore-then-commit bandit library.
//
// Exit codes: 0 success, 1 invalid input/flags, 2 file I/O failure,
// 3 numeric/capacity/sampling failure.

#include <charconv>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "etcb/analysis.hpp"
#include "etcb/arms.hpp"
#include "etcb/errors.hpp"
#include "etcb/estimators.hpp"
#include "etcb/harness.hpp"
#include "etcb/presets.hpp"

namespace {

double parse_number_token(const std::string& token, const std::string& path,
                          std::size_t line_no) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end != begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw etcb::InputError(path + " line " + std::to_string(line_no) + ": cannot parse '" +
                           token + "' as a number");
  return value;
}

etcb::ExplorationLog read_log_csv(const std::string& path, bool paired) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw etcb::IoError("cannot read log file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      const std::string token =
          comma == std::string::npos ? line.substr(pos) : line.substr(pos, comma - pos);
      row.push_back(parse_number_token(token, path, line_no));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw etcb::InputError(path + ": log file has no rows (expected numeric CSV, one "
                           "exploration round per line, one column per arm)");
  return etcb::ExplorationLog::from_rows(rows, paired);
}

std::string tradeoff_to_csv(const etcb::TradeoffCurve& curve) {
  std::string out = "n,cost,weighted_regret,objective,is_argmin\n";
  for (const etcb::TradeoffPoint& point : curve.points) {
    out += std::to_string(point.n);
    out += ',';
    out += etcb::format_double(point.cost);
    out += ',';
    out += etcb::format_double(point.weighted_regret);
    out += ',';
    out += etcb::format_double(point.objective);
    out += ',';
    out += point.n == curve.n_opt ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-averse explore-then-commit bandit toolkit"};
  app.require_subcommand(1);

  // --- sample-size ----------------------------------------------------------
  auto* sample_size = app.add_subcommand(
      "sample-size", "Smallest exploration size guaranteeing the target regret bound");
  int ss_k = 2;
  double ss_epsilon = 0.05;
  double ss_delta_p = 0.1;
  int ss_m = 1;
  sample_size->add_option("--k", ss_k, "number of arms (>= 2)")->required();
  sample_size->add_option("--epsilon", ss_epsilon, "regret bound epsilon_r, in (0, 1)")
      ->required();
  sample_size->add_option("--delta-p", ss_delta_p, "win-probability gap delta_p, in (0, 1]")
      ->required();
  sample_size->add_option("--m", ss_m, "exploitation length M (>= 1, default 1)");
  sample_size->callback([&] {
    const std::int64_t n = ss_m == 1 ? etcb::sample_size_ote(ss_k, ss_epsilon, ss_delta_p)
                                     : etcb::sample_size_fte(ss_k, ss_epsilon, ss_delta_p, ss_m);
    std::cout << n << "\n";
  });

  // --- estimate --------------------------------------------------------------
  auto* estimate = app.add_subcommand(
      "estimate", "Win-probability estimates from an exploration log (numeric CSV: one row "
                  "per round, one column per arm)");
  std::string est_log_path;
  int est_m = 1;
  bool est_paired = false;
  std::optional<double> est_threshold;
  std::optional<std::uint64_t> est_budget;
  std::uint64_t est_cap = etcb::kDefaultComboCap;
  std::uint64_t est_subset_seed = 0x5eed5eedULL;
  estimate->add_option("--log", est_log_path, "path to the exploration log CSV")->required();
  estimate->add_option("--m", est_m, "exploitation length M (>= 1, default 1)");
  estimate->add_flag("--paired", est_paired,
                     "treat rows as matched draws and use the paired estimator");
  estimate->add_option("--threshold", est_threshold,
                       "also require the winning value to reach this threshold "
                       "(independent M=1 estimator only)");
  estimate->add_option("--budget", est_budget,
                       "subset-tuple sample budget (>= 1) once C(N, M) exceeds --cap");
  estimate->add_option("--cap", est_cap,
                       "largest C(N, M) enumerated exactly (default 1000000)");
  estimate->add_option("--subset-seed", est_subset_seed,
                       "seed for the budgeted subset sampler (default 0x5eed5eed)");
  estimate->callback([&] {
    if (est_m < 1) throw etcb::InputError("--m must be >= 1");
    if (est_m == 1 && est_budget)
      throw etcb::InputError("--budget only applies to --m >= 2");
    if (est_threshold && (est_paired || est_m != 1))
      throw etcb::InputError(
          "--threshold only applies to the independent M=1 estimator");
    const etcb::ExplorationLog log = read_log_csv(est_log_path, est_paired);
    etcb::WinProbabilities result =
        est_m == 1 ? (est_paired ? etcb::estimate_ote_paired(log)
                                 : etcb::estimate_ote_independent(log, est_threshold))
                   : etcb::estimate_fte(log, est_m, est_paired, est_budget, est_cap,
                                        est_subset_seed);
    std::cerr << "method: " << etcb::to_string(result.method)
              << ", samples per arm: " << result.samples_used << "\n";
    std::cout << "arm,estimate\n";
    for (std::size_t k = 0; k < result.values.size(); ++k)
      std::cout << k << "," << etcb::format_double(result.values[k]) << "\n";
  });

  // --- simulate ---------------------------------------------------------------
  auto* simulate = app.add_subcommand(
      "simulate", "Run a config-driven regret experiment and write the results CSV");
  std::string sim_config_path;
  std::string sim_out_path;
  simulate->add_option("--config", sim_config_path, "path to the JSON experiment config")
      ->required();
  simulate->add_option("--out", sim_out_path, "path of the CSV file to write")->required();
  simulate->callback([&] {
    const etcb::ExperimentConfig config = etcb::load_config(sim_config_path);
    const etcb::RegretCurve curve =
        etcb::run_experiment(config, [](std::size_t done, std::size_t total) {
          std::cerr << "grid point " << done << "/" << total << " complete\n";
        });
    etcb::write_results(curve, sim_out_path);
    std::cerr << "wrote " << sim_out_path << "\n";
  });

  // --- exact-regret ------------------------------------------------------------
  auto* exact = app.add_subcommand(
      "exact-regret", "Exact two-arm majority-vote regret for a given round-win probability");
  double er_p_star = 0.6;
  std::int64_t er_n = 1;
  exact->add_option("--p-star", er_p_star, "round-win probability of the better arm, in [0, 1]")
      ->required();
  exact->add_option("--n", er_n, "number of matched exploration rounds (1..100000)")
      ->required();
  exact->callback(
      [&] { std::cout << etcb::format_double(etcb::exact_regret_two_arm(er_p_star, er_n)) << "\n"; });

  // --- tradeoff ----------------------------------------------------------------
  auto* tradeoff = app.add_subcommand(
      "tradeoff", "Cost-regret trade-off curve and its grid argmin");
  double to_p_star = 0.6;
  double to_divisor = 5.0;
  double to_alpha = 100.0;
  std::int64_t to_n_min = 1;
  std::int64_t to_n_max = 200;
  std::string to_out_path;
  tradeoff->add_option("--p-star", to_p_star,
                       "round-win probability of the better arm, in [0, 1]")
      ->required();
  tradeoff->add_option("--divisor", to_divisor, "cost(N) = N / divisor (> 0, default 5)");
  tradeoff->add_option("--alpha", to_alpha, "regret weight in the objective (>= 0, default 100)");
  tradeoff->add_option("--n-min", to_n_min, "first grid point (>= 1, default 1)");
  tradeoff->add_option("--n-max", to_n_max, "last grid point (>= n-min, default 200)");
  tradeoff->add_option("--out", to_out_path,
                       "write the CSV here instead of standard output (prints the argmin)");
  tradeoff->callback([&] {
    if (to_n_min < 1) throw etcb::InputError("--n-min must be >= 1");
    if (to_n_max < to_n_min) throw etcb::InputError("--n-max must be >= --n-min");
    etcb::CostSpec spec;
    spec.cost_per_experiment_divisor = to_divisor;
    spec.tradeoff_alpha = to_alpha;
    for (std::int64_t n = to_n_min; n <= to_n_max; ++n) spec.n_grid.push_back(n);
    const etcb::TradeoffCurve curve = etcb::cost_regret_argmin(to_p_star, spec);
    const std::string csv = tradeoff_to_csv(curve);
    if (to_out_path.empty()) {
      std::cout << csv;
    } else {
      std::ofstream out(to_out_path, std::ios::binary | std::ios::trunc);
      if (!out) throw etcb::IoError("cannot open output file for writing: " + to_out_path);
      out << csv;
      out.flush();
      if (!out) throw etcb::IoError("failed while writing output file: " + to_out_path);
      std::cout << curve.n_opt << "\n";
    }
  });

  // --- reproduce ----------------------------------------------------------------
  auto* reproduce = app.add_subcommand(
      "reproduce", "Regenerate the data behind one bundled figure preset (fig1..fig7)");
  std::string rep_tag;
  std::string rep_out_dir = ".";
  std::uint64_t rep_reps = 100'000;
  int rep_threads = 0;
  reproduce->add_option("figure", rep_tag, "preset tag, one of fig1..fig7")->required();
  reproduce->add_option("--out", rep_out_dir, "output directory (default .)");
  reproduce->add_option("--reps", rep_reps,
                        "Monte Carlo replications for fig1..fig5 (default 100000)");
  reproduce->add_option("--threads", rep_threads, "worker threads (0 = auto)");
  reproduce->callback([&] {
    if (rep_threads < 0) throw etcb::InputError("--threads must be >= 0");
    const std::vector<std::string> files =
        etcb::presets::run_preset(rep_tag, rep_out_dir, rep_reps, rep_threads);
    for (const std::string& file : files) std::cout << file << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends: print and exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const etcb::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const etcb::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const etcb::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const etcb::CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const etcb::SamplingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
