#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "etcb/rng.hpp"
#include "etcb/win_probabilities.hpp"

namespace etcb {

// One mixture component of an arm's reward density on [support_lo, support_hi]:
//   truncated-gaussian: weight * exp(-scale * (u - mean)^2)
//   uniform:            weight * 1
// The mixture is normalized over the support, so weights are relative.
struct ArmComponent {
  enum class Kind { kTruncatedGaussian, kUniform };
  Kind kind = Kind::kUniform;
  double weight = 1.0;
  double mean = 0.0;   // truncated-gaussian only
  double scale = 1.0;  // truncated-gaussian only; the coefficient in exp(-scale * (u-mean)^2)
};

// Bounded continuous reward distribution: a normalized mixture of truncated
// Gaussian bumps and a uniform floor. Normalization constants, per-component
// masses and rejection envelopes are computed once at construction.
class ArmDistribution {
 public:
  ArmDistribution(std::vector<ArmComponent> components, double support_lo, double support_hi);

  static ArmDistribution truncated_gaussian(double mean, double scale, double lo, double hi);
  static ArmDistribution uniform(double lo, double hi);

  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  const std::vector<ArmComponent>& components() const { return components_; }

  // Normalized density / distribution function; cdf clamps outside the support.
  double pdf(double u) const;
  double cdf(double u) const;

  // One exact draw: pick a component by its integrated mass, then rejection-
  // sample it against a support-wide uniform envelope. Throws SamplingError
  // after max_attempts rejected proposals.
  double sample(Rng& rng, std::uint64_t max_attempts = kDefaultMaxAttempts) const;

  static constexpr std::uint64_t kDefaultMaxAttempts = 1'000'000;

 private:
  double component_density(std::size_t i, double u) const;  // unnormalized, weight excluded

  std::vector<ArmComponent> components_;
  double lo_ = 0.0;
  double hi_ = 1.0;
  double norm_ = 1.0;                    // integral of the weighted mixture over the support
  std::vector<double> mass_cdf_;         // cumulative component masses, normalized to 1
  std::vector<double> component_mass_;   // integral of each unweighted component density
  std::vector<double> envelope_;         // per-component sup of the unweighted density
};

// K >= 2 independent arms drawn simultaneously.
struct BanditModel {
  BanditModel(std::vector<ArmDistribution> arms_in, std::string label_in);

  int arm_count() const { return static_cast<int>(arms.size()); }

  std::vector<ArmDistribution> arms;
  std::string label;
};

// One simultaneous reward vector (arm order 0..K-1).
std::vector<double> sample(const BanditModel& model, Rng& rng,
                           std::uint64_t max_attempts = ArmDistribution::kDefaultMaxAttempts);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// Quadrature breakpoints that pin down an arm's kinks and narrow modes
// (support edges, Gaussian means +/- 1 and 3 sigma), clipped to [lo, hi].
std::vector<double> quadrature_breakpoints(const ArmDistribution& arm, double lo, double hi);

// E[g(R)] by adaptive Simpson quadrature (absolute tolerance ~1e-8).
double expect(const ArmDistribution& arm, const std::function<double(double)>& g,
              double tol = 1e-8);

// Mean and variance by quadrature; absolute error <= 1e-6 on sane scales.
Moments moments_oracle(const ArmDistribution& arm);

// Central moment E[(R - mean)^order] by quadrature (used for tight statistical
// tolerances on sampled variance).
double central_moment_oracle(const ArmDistribution& arm, int order);

struct OracleOptions {
  std::uint64_t mc_draws = 10'000'000;  // Monte Carlo draws when m >= 2
  std::uint64_t seed = 0x5eedf00dcafeULL;
  int chunks = 64;                      // fixed partition; results independent of threads
  int threads = 0;                      // 0 = hardware concurrency
};

// Ground-truth probability, per arm, that its length-m reward sum weakly
// dominates every rival's. m = 1 is computed by quadrature of f_k * prod F_j
// (deterministic, abs error ~1e-6); m >= 2 by deterministic-seeded Monte Carlo
// with std_errors filled in.
WinProbabilities win_probability_oracle(const BanditModel& model, int m,
                                        const OracleOptions& options = {});

// alpha-tail conditional expectation E[R | R < v_alpha] where P(R < v_alpha) =
// alpha: quantile by bisection on the cdf, tail mean by quadrature.
double cvar_oracle(const ArmDistribution& arm, double alpha);

}  // namespace etcb
