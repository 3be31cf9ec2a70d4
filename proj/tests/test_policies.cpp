#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "etcb/errors.hpp"
#include "etcb/policies.hpp"
#include "etcb/presets.hpp"
#include "etcb/rng.hpp"

using etcb::ExplorationLog;
using etcb::PolicyDecision;
using etcb::Rng;

TEST_CASE("argmax/argmin helpers break ties toward the lowest index") {
  CHECK(etcb::argmax_lowest_index({1.0, 3.0, 3.0, 2.0}) == 1);
  CHECK(etcb::argmin_lowest_index({4.0, 2.0, 2.0, 9.0}) == 1);
  CHECK(etcb::argmax_lowest_index({5.0}) == 0);
  CHECK_THROWS_AS(etcb::argmax_lowest_index({}), etcb::InputError);
  CHECK_THROWS_AS(etcb::argmin_lowest_index({}), etcb::InputError);
}

TEST_CASE("ote-mab commits to the top estimated win probability") {
  const ExplorationLog log =
      ExplorationLog::from_rows({{1.0, 0.0}, {2.0, 2.5}, {3.0, 4.0}}, true);

  const PolicyDecision independent = etcb::ote_mab(log, false);
  CHECK(independent.policy == "ote-mab");
  CHECK(independent.chosen_arm == 1);  // estimates (4/9, 5/9)
  CHECK(independent.scores[0] == doctest::Approx(4.0 / 9.0));
  CHECK(independent.scores[1] == doctest::Approx(5.0 / 9.0));
  CHECK(!independent.hyper.has_value());

  const PolicyDecision paired = etcb::ote_mab(log, true);
  CHECK(paired.policy == "ote-mab-paired");
  CHECK(paired.chosen_arm == 1);  // estimates (1/3, 2/3)

  // Identical columns tie; the lowest index wins.
  const ExplorationLog flat = ExplorationLog::from_rows({{2.0, 2.0}, {5.0, 5.0}}, true);
  CHECK(etcb::ote_mab(flat, false).chosen_arm == 0);
  CHECK(etcb::ote_mab(flat, true).chosen_arm == 0);

  CHECK_THROWS_AS(etcb::ote_mab(log, true, 1.0), etcb::InputError);
}

TEST_CASE("fte-mab commits on subset-sum estimates") {
  const ExplorationLog log =
      ExplorationLog::from_rows({{1.0, 0.0}, {2.0, 2.5}, {3.0, 4.0}}, true);
  // Two-round estimates tie at 5/9 vs 5/9 (independent) and 2/3 vs 2/3
  // (paired), so both variants fall back to arm 0.
  const PolicyDecision independent = etcb::fte_mab(log, 2, false);
  CHECK(independent.policy == "fte-mab");
  CHECK(independent.chosen_arm == 0);
  const PolicyDecision paired = etcb::fte_mab(log, 2, true);
  CHECK(paired.policy == "fte-mab-paired");
  CHECK(paired.chosen_arm == 0);
}

TEST_CASE("committing on the full-log sum equals committing on the best mean") {
  Rng rng(0xfeedULL);
  std::vector<std::vector<double>> rows(7, std::vector<double>(3));
  for (auto& row : rows)
    for (double& v : row) v = rng.uniform(0.0, 5.0);
  const ExplorationLog log = ExplorationLog::from_rows(rows, true);

  std::vector<double> totals(3, 0.0);
  for (const auto& row : rows)
    for (std::size_t k = 0; k < 3; ++k) totals[k] += row[k];
  const int best_mean = etcb::argmax_lowest_index(totals);

  CHECK(etcb::fte_mab(log, 7, false).chosen_arm == best_mean);
  CHECK(etcb::fte_mab(log, 7, true).chosen_arm == best_mean);
}

TEST_CASE("expexp ranks arms by the variance-minus-scaled-mean score") {
  const ExplorationLog log = ExplorationLog::from_rows(
      {{8.0, 0.5}, {12.0, 1.5}, {8.0, 0.5}, {12.0, 1.5}}, true);
  // Arm 0: mean 10, unbiased variance 16/3. Arm 1: mean 1, variance 1/3.

  const PolicyDecision lowrho = etcb::expexp(log, 0.5);
  CHECK(lowrho.policy == "expexp");
  REQUIRE(lowrho.hyper.has_value());
  CHECK(*lowrho.hyper == doctest::Approx(0.5));
  CHECK(lowrho.scores[0] == doctest::Approx(16.0 / 3.0 - 5.0));
  CHECK(lowrho.scores[1] == doctest::Approx(1.0 / 3.0 - 0.5));
  CHECK(lowrho.chosen_arm == 1);

  const PolicyDecision highrho = etcb::expexp(log, 2.0);
  CHECK(highrho.chosen_arm == 0);

  CHECK_THROWS_AS(etcb::expexp(log, -0.1), etcb::InputError);
  const ExplorationLog one_row = ExplorationLog::from_rows({{1.0, 2.0}}, true);
  CHECK_THROWS_AS(etcb::expexp(one_row, 1.0), etcb::InputError);
}

TEST_CASE("marab ranks arms by the lower-tail sample mean") {
  std::vector<std::vector<double>> rows;
  for (int i = 1; i <= 10; ++i)
    rows.push_back({static_cast<double>(i), 2.0});
  const ExplorationLog log = ExplorationLog::from_rows(rows, true);

  const PolicyDecision cautious = etcb::marab_commit(log, 0.2);
  CHECK(cautious.policy == "marab");
  REQUIRE(cautious.hyper.has_value());
  CHECK(*cautious.hyper == doctest::Approx(0.2));
  CHECK(cautious.scores[0] == doctest::Approx(1.5));  // mean of {1, 2}
  CHECK(cautious.scores[1] == doctest::Approx(2.0));
  CHECK(cautious.chosen_arm == 1);

  const PolicyDecision broad = etcb::marab_commit(log, 0.95);
  CHECK(broad.scores[0] == doctest::Approx(5.5));  // mean of all ten values
  CHECK(broad.chosen_arm == 0);

  CHECK_THROWS_AS(etcb::marab_commit(log, 0.0), etcb::InputError);
  CHECK_THROWS_AS(etcb::marab_commit(log, 1.0), etcb::InputError);
}

TEST_CASE("ucb1-commit finds the highest near-deterministic level") {
  const auto model = etcb::presets::deterministic_levels({1.0, 2.0, 5.0});
  Rng rng(0x0031ULL);
  std::vector<std::int64_t> pulls;
  const PolicyDecision decision = etcb::ucb1_commit(model, 300, rng, &pulls);
  CHECK(decision.policy == "ucb1");
  CHECK(decision.chosen_arm == 2);
  REQUIRE(pulls.size() == 3);
  std::int64_t total = 0;
  for (std::int64_t p : pulls) {
    CHECK(p >= 1);
    total += p;
  }
  CHECK(total == 300);
  CHECK(std::max_element(pulls.begin(), pulls.end()) - pulls.begin() == 2);
  CHECK(decision.scores[2] == doctest::Approx(5.0).epsilon(1e-6));

  Rng rng2(0x0032ULL);
  CHECK_THROWS_AS(etcb::ucb1_commit(model, 2, rng2), etcb::InputError);
}
