#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "etcb/arms.hpp"
#include "etcb/errors.hpp"
#include "etcb/numeric.hpp"
#include "etcb/presets.hpp"
#include "etcb/rng.hpp"

using etcb::ArmDistribution;
using etcb::BanditModel;
using etcb::Rng;

namespace {

double integrate_pdf(const ArmDistribution& arm, double lo, double hi) {
  return etcb::adaptive_simpson_segmented([&](double u) { return arm.pdf(u); }, lo, hi,
                                          etcb::quadrature_breakpoints(arm, lo, hi), 1e-10);
}

std::vector<const BanditModel*> preset_models_for_scan() {
  static const BanditModel models[] = {
      etcb::presets::tight_vs_bimodal(), etcb::presets::overlapping_gaussians(),
      etcb::presets::high_variance_winner(), etcb::presets::wide_vs_bimodal(),
      etcb::presets::separated_two_scale()};
  std::vector<const BanditModel*> out;
  for (const auto& m : models) out.push_back(&m);
  return out;
}

}  // namespace

TEST_CASE("densities integrate to one and cdf spans [0, 1]") {
  for (const BanditModel* model : preset_models_for_scan()) {
    for (const ArmDistribution& arm : model->arms) {
      CAPTURE(model->label);
      CHECK(integrate_pdf(arm, arm.support_lo(), arm.support_hi()) ==
            doctest::Approx(1.0).epsilon(1e-7));
      CHECK(arm.cdf(arm.support_lo()) == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(arm.cdf(arm.support_hi()) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(arm.cdf(arm.support_lo() - 5.0) == 0.0);
      CHECK(arm.cdf(arm.support_hi() + 5.0) == 1.0);
    }
  }
}

TEST_CASE("cdf matches the integral of pdf at interior points") {
  const ArmDistribution arm = etcb::presets::tight_vs_bimodal().arms[1];
  for (double x : {0.5, 1.0, 2.0, 4.5, 7.9, 9.5}) {
    const double integral = integrate_pdf(arm, arm.support_lo(), x);
    CHECK(arm.cdf(x) == doctest::Approx(integral).epsilon(1e-8));
  }
}

TEST_CASE("uniform arm has flat density and linear cdf") {
  const ArmDistribution arm = ArmDistribution::uniform(2.0, 6.0);
  CHECK(arm.pdf(3.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(arm.pdf(5.9) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(arm.cdf(4.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(arm.cdf(2.0 + 4.0 * 0.3) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("moments: closed forms for uniform and tight gaussian") {
  const auto uniform = etcb::moments_oracle(ArmDistribution::uniform(2.0, 6.0));
  CHECK(uniform.mean == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(uniform.variance == doctest::Approx(4.0 / 3.0).epsilon(1e-9));

  // exp(-2 (u-3)^2) on [0, 10]: the support clips +-6 sigma and beyond, so the
  // untruncated values (mean 3, variance 1/4) hold to high precision.
  const auto tight =
      etcb::moments_oracle(ArmDistribution::truncated_gaussian(3.0, 2.0, 0.0, 10.0));
  CHECK(tight.mean == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(tight.variance == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("moments: the bimodal mixture sits near mean 3.8 with wide spread") {
  const BanditModel model = etcb::presets::tight_vs_bimodal();
  const auto m1 = etcb::moments_oracle(model.arms[0]);
  const auto m2 = etcb::moments_oracle(model.arms[1]);
  CHECK(std::abs(m1.mean - 3.0) < 0.05);
  CHECK(std::abs(m2.mean - 3.8) < 0.05);
  CHECK(m2.variance > m1.variance);
  // 0.6/0.4 mass split between modes at 1 and 8: E[u^2] ~ 26.26, var ~ 11.8.
  CHECK(m2.variance > 11.0);
  CHECK(m2.variance < 13.0);
}

TEST_CASE("moments: the disjoint-support pair lands near (10, 10) and (1, 1)") {
  const BanditModel model = etcb::presets::separated_two_scale();
  const auto a = etcb::moments_oracle(model.arms[0]);
  const auto b = etcb::moments_oracle(model.arms[1]);
  CHECK(a.mean == doctest::Approx(10.0).epsilon(0.01));
  CHECK(a.variance == doctest::Approx(10.0).epsilon(0.03));
  CHECK(b.mean == doctest::Approx(1.0).epsilon(0.01));
  CHECK(b.variance == doctest::Approx(1.0).epsilon(0.03));
  CHECK(model.arms[0].support_lo() >= model.arms[1].support_hi());
}

TEST_CASE("expect evaluates plain functionals") {
  const ArmDistribution arm = ArmDistribution::uniform(0.0, 1.0);
  CHECK(etcb::expect(arm, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(etcb::expect(arm, [](double u) { return u; }) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(etcb::expect(arm, [](double u) { return u * u; }) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("sampler matches the analytic cdf and moments") {
  const ArmDistribution arm = etcb::presets::tight_vs_bimodal().arms[1];
  const auto moments = etcb::moments_oracle(arm);
  const double mu4 = etcb::central_moment_oracle(arm, 4);

  constexpr std::size_t kDraws = 200'000;
  Rng rng(0xa11ce5ULL);
  std::vector<double> draws(kDraws);
  double sum = 0.0;
  for (double& d : draws) {
    d = arm.sample(rng);
    REQUIRE(d >= arm.support_lo());
    REQUIRE(d <= arm.support_hi());
    sum += d;
  }
  const double mean = sum / kDraws;
  double ss = 0.0;
  for (double d : draws) ss += (d - mean) * (d - mean);
  const double variance = ss / (kDraws - 1);

  const double mean_se = std::sqrt(moments.variance / kDraws);
  CHECK(std::abs(mean - moments.mean) < 4.0 * mean_se);
  const double var_se =
      std::sqrt((mu4 - moments.variance * moments.variance) / kDraws);
  CHECK(std::abs(variance - moments.variance) < 4.0 * var_se);

  for (double x : {0.8, 2.0, 5.0, 7.6, 8.4}) {
    const double f = arm.cdf(x);
    const double empirical =
        static_cast<double>(std::count_if(draws.begin(), draws.end(),
                                          [x](double d) { return d <= x; })) /
        kDraws;
    const double se = std::sqrt(f * (1.0 - f) / kDraws);
    CAPTURE(x);
    CHECK(std::abs(empirical - f) < 4.5 * se);
  }
}

TEST_CASE("single-round win probabilities: closed-form pairs") {
  // Uniform[0,2] vs Uniform[0,1]: P(first wins) = 3/4 exactly.
  std::vector<ArmDistribution> arms{ArmDistribution::uniform(0.0, 2.0),
                                    ArmDistribution::uniform(0.0, 1.0)};
  const auto p = etcb::win_probability_oracle(BanditModel(arms, "pair"), 1);
  REQUIRE(p.values.size() == 2);
  CHECK(p.values[0] == doctest::Approx(0.75).epsilon(1e-6));
  CHECK(p.values[1] == doctest::Approx(0.25).epsilon(1e-6));

  const auto shifted = etcb::win_probability_oracle(
      etcb::presets::shifted_uniform_pair(etcb::presets::shift_for_win_probability_06()), 1);
  CHECK(shifted.values[0] == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(shifted.values[1] == doctest::Approx(0.4).epsilon(1e-6));

  std::vector<ArmDistribution> same{ArmDistribution::uniform(0.0, 1.0),
                                    ArmDistribution::uniform(0.0, 1.0)};
  const auto symmetric = etcb::win_probability_oracle(BanditModel(same, "same"), 1);
  CHECK(symmetric.values[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(symmetric.values[1] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("single-round win probabilities sum to one for continuous models") {
  for (const BanditModel* model : preset_models_for_scan()) {
    const auto p = etcb::win_probability_oracle(*model, 1);
    double total = 0.0;
    for (double v : p.values) total += v;
    CAPTURE(model->label);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("two-round win probability: Monte Carlo oracle vs independent quadrature") {
  const double shift = etcb::presets::shift_for_win_probability_06();
  const BanditModel model = etcb::presets::shifted_uniform_pair(shift);

  // Sum of two standard uniforms: triangular density on [0, 2].
  auto ih_pdf = [](double t) {
    if (t < 0.0 || t > 2.0) return 0.0;
    return t <= 1.0 ? t : 2.0 - t;
  };
  auto ih_cdf = [](double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 2.0) return 1.0;
    return t <= 1.0 ? 0.5 * t * t : 1.0 - 0.5 * (2.0 - t) * (2.0 - t);
  };
  const double d = 2.0 * shift;  // arm 0's two-round sum = d + IrwinHall(2)
  const double reference = etcb::adaptive_simpson_segmented(
      [&](double x) { return ih_pdf(x - d) * ih_cdf(x); }, d, 2.0 + d,
      {1.0, 1.0 + d, 2.0}, 1e-10);

  const auto p = etcb::win_probability_oracle(model, 2);
  REQUIRE(p.std_errors.size() == 2);
  CHECK(p.std_errors[0] > 0.0);
  CHECK(std::abs(p.values[0] - reference) < 5.0 * p.std_errors[0] + 1e-9);
  CHECK(p.values[0] + p.values[1] == doctest::Approx(1.0).epsilon(1e-3));

  const auto again = etcb::win_probability_oracle(model, 2);
  CHECK(again.values[0] == p.values[0]);  // bit-identical rerun
  CHECK(again.values[1] == p.values[1]);
}

TEST_CASE("cvar oracle: closed forms and a sampling cross-check") {
  CHECK(etcb::cvar_oracle(ArmDistribution::uniform(0.0, 1.0), 0.5) ==
        doctest::Approx(0.25).epsilon(1e-7));
  CHECK(etcb::cvar_oracle(ArmDistribution::uniform(0.0, 1.0), 0.2) ==
        doctest::Approx(0.1).epsilon(1e-7));
  CHECK(etcb::cvar_oracle(ArmDistribution::uniform(2.0, 6.0), 0.5) ==
        doctest::Approx(3.0).epsilon(1e-7));

  // Symmetric near-Gaussian: E[R | R < mean] = mean - sigma sqrt(2/pi).
  const ArmDistribution tight = ArmDistribution::truncated_gaussian(3.0, 2.0, 0.0, 10.0);
  CHECK(etcb::cvar_oracle(tight, 0.5) ==
        doctest::Approx(3.0 - 0.5 * std::sqrt(2.0 / M_PI)).epsilon(1e-4));

  const ArmDistribution bimodal = etcb::presets::tight_vs_bimodal().arms[1];
  const double oracle = etcb::cvar_oracle(bimodal, 0.6);
  constexpr std::size_t kDraws = 400'000;
  Rng rng(0xcafef00dULL);
  std::vector<double> draws(kDraws);
  for (double& v : draws) v = bimodal.sample(rng);
  const std::size_t q = static_cast<std::size_t>(std::ceil(0.6 * kDraws));
  std::nth_element(draws.begin(), draws.begin() + q, draws.end());
  double tail = 0.0;
  for (std::size_t i = 0; i < q; ++i) tail += draws[i];
  CHECK(std::abs(tail / q - oracle) < 0.02);
}

TEST_CASE("construction and argument validation") {
  using etcb::InputError;
  std::vector<etcb::ArmComponent> empty;
  CHECK_THROWS_AS(ArmDistribution(empty, 0.0, 1.0), InputError);
  CHECK_THROWS_AS(ArmDistribution::uniform(1.0, 1.0), InputError);
  CHECK_THROWS_AS(ArmDistribution::uniform(2.0, 1.0), InputError);
  CHECK_THROWS_AS(ArmDistribution::truncated_gaussian(0.0, 0.0, 0.0, 1.0), InputError);
  CHECK_THROWS_AS(ArmDistribution::truncated_gaussian(0.0, -1.0, 0.0, 1.0), InputError);

  etcb::ArmComponent bad;
  bad.kind = etcb::ArmComponent::Kind::kUniform;
  bad.weight = 0.0;
  CHECK_THROWS_AS(ArmDistribution({bad}, 0.0, 1.0), InputError);

  std::vector<ArmDistribution> one{ArmDistribution::uniform(0.0, 1.0)};
  CHECK_THROWS_AS(BanditModel(one, "one"), InputError);

  const ArmDistribution u = ArmDistribution::uniform(0.0, 1.0);
  CHECK_THROWS_AS(etcb::cvar_oracle(u, 0.0), InputError);
  CHECK_THROWS_AS(etcb::cvar_oracle(u, 1.0), InputError);

  std::vector<ArmDistribution> two{ArmDistribution::uniform(0.0, 1.0),
                                   ArmDistribution::uniform(0.0, 1.0)};
  CHECK_THROWS_AS(etcb::win_probability_oracle(BanditModel(two, "two"), 0), InputError);
}

TEST_CASE("a starved rejection budget fails loudly") {
  // Acceptance rate ~ 2e-3 for this near-spike, so a 3-attempt budget cannot
  // realistically succeed.
  const ArmDistribution spike = ArmDistribution::truncated_gaussian(5.0, 1e4, 0.0, 10.0);
  Rng rng(1);
  CHECK_THROWS_AS(spike.sample(rng, 3), etcb::SamplingError);
}

TEST_CASE("quadrature breakpoints are sorted interior kink markers") {
  const ArmDistribution arm = etcb::presets::tight_vs_bimodal().arms[1];
  const auto pts = etcb::quadrature_breakpoints(arm, arm.support_lo(), arm.support_hi());
  REQUIRE(pts.size() >= 2);
  CHECK(std::is_sorted(pts.begin(), pts.end()));
  for (const double p : pts) {
    CHECK(p > arm.support_lo());
    CHECK(p < arm.support_hi());
  }
  // Both mixture modes must be marked so narrow peaks cannot slip between
  // integration segments.
  CHECK(std::find(pts.begin(), pts.end(), 1.0) != pts.end());
  CHECK(std::find(pts.begin(), pts.end(), 8.0) != pts.end());
}
