#include "etcb/arms.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "etcb/errors.hpp"
#include "etcb/numeric.hpp"

namespace etcb {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Integral of exp(-scale * (u - mean)^2) over [a, b].
double gaussian_mass(double mean, double scale, double a, double b) {
  const double root = std::sqrt(scale);
  return 0.5 * std::sqrt(kPi / scale) * (std::erf(root * (b - mean)) - std::erf(root * (a - mean)));
}

// Supremum of a component's unweighted density over [lo, hi], located by a
// 10^4-point grid scan plus ternary refinement around the best grid cell.
double grid_refined_max(const std::function<double(double)>& g, double lo, double hi) {
  constexpr int kGridPoints = 10'000;
  const double step = (hi - lo) / (kGridPoints - 1);
  double best = -1.0;
  int best_index = 0;
  for (int i = 0; i < kGridPoints; ++i) {
    const double x = (i == kGridPoints - 1) ? hi : lo + step * i;
    const double v = g(x);
    if (v > best) {
      best = v;
      best_index = i;
    }
  }
  double a = lo + step * std::max(0, best_index - 1);
  double b = std::min(hi, lo + step * (best_index + 1));
  for (int iter = 0; iter < 200 && b - a > 0.0; ++iter) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    if (m1 <= a || m2 >= b) break;
    if (g(m1) < g(m2))
      a = m1;
    else
      b = m2;
  }
  best = std::max(best, g(0.5 * (a + b)));
  return best;
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

ArmDistribution::ArmDistribution(std::vector<ArmComponent> components, double support_lo,
                                 double support_hi)
    : components_(std::move(components)), lo_(support_lo), hi_(support_hi) {
  if (!finite(lo_) || !finite(hi_) || !(hi_ > lo_))
    throw InputError("arm support must be a finite interval with support_hi > support_lo");
  if (components_.empty()) throw InputError("arm needs at least one mixture component");
  component_mass_.reserve(components_.size());
  envelope_.reserve(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const ArmComponent& c = components_[i];
    if (!finite(c.weight) || c.weight <= 0.0)
      throw InputError("component weight must be positive (component " + std::to_string(i) + ")");
    double mass = 0.0;
    double env = 0.0;
    if (c.kind == ArmComponent::Kind::kTruncatedGaussian) {
      if (!finite(c.mean))
        throw InputError("component mean must be finite (component " + std::to_string(i) + ")");
      if (!finite(c.scale) || c.scale <= 0.0)
        throw InputError("component scale must be positive (component " + std::to_string(i) + ")");
      mass = gaussian_mass(c.mean, c.scale, lo_, hi_);
      env = grid_refined_max([&](double u) { return component_density(i, u); }, lo_, hi_);
    } else {
      mass = hi_ - lo_;
      env = 1.0;
    }
    if (!(mass > 0.0) || !finite(mass))
      throw InputError("component " + std::to_string(i) + " has no mass on the support");
    component_mass_.push_back(mass);
    envelope_.push_back(env * (1.0 + 1e-9));
  }
  norm_ = 0.0;
  mass_cdf_.reserve(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    norm_ += components_[i].weight * component_mass_[i];
    mass_cdf_.push_back(norm_);
  }
  if (!(norm_ > 0.0) || !finite(norm_)) throw InputError("arm density does not normalize");
  for (double& acc : mass_cdf_) acc /= norm_;
  mass_cdf_.back() = 1.0;
}

ArmDistribution ArmDistribution::truncated_gaussian(double mean, double scale, double lo,
                                                    double hi) {
  return ArmDistribution({{ArmComponent::Kind::kTruncatedGaussian, 1.0, mean, scale}}, lo, hi);
}

ArmDistribution ArmDistribution::uniform(double lo, double hi) {
  return ArmDistribution({{ArmComponent::Kind::kUniform, 1.0, 0.0, 1.0}}, lo, hi);
}

double ArmDistribution::component_density(std::size_t i, double u) const {
  const ArmComponent& c = components_[i];
  if (c.kind == ArmComponent::Kind::kTruncatedGaussian) {
    const double d = u - c.mean;
    return std::exp(-c.scale * d * d);
  }
  return 1.0;
}

double ArmDistribution::pdf(double u) const {
  if (u < lo_ || u > hi_) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i)
    acc += components_[i].weight * component_density(i, u);
  return acc / norm_;
}

double ArmDistribution::cdf(double u) const {
  if (u <= lo_) return 0.0;
  if (u >= hi_) return 1.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const ArmComponent& c = components_[i];
    if (c.kind == ArmComponent::Kind::kTruncatedGaussian)
      acc += c.weight * gaussian_mass(c.mean, c.scale, lo_, u);
    else
      acc += c.weight * (u - lo_);
  }
  return std::min(1.0, acc / norm_);
}

double ArmDistribution::sample(Rng& rng, std::uint64_t max_attempts) const {
  // Component by integrated mass, then support-wide uniform-envelope rejection.
  const double pick = rng.uniform01();
  std::size_t i = std::upper_bound(mass_cdf_.begin(), mass_cdf_.end(), pick) - mass_cdf_.begin();
  if (i >= components_.size()) i = components_.size() - 1;
  const double env = envelope_[i];
  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    const double u = rng.uniform(lo_, hi_);
    const double y = env * rng.uniform01();
    const double g = component_density(i, u);
    if (g > env)
      throw NumericError("rejection envelope undershoots the density; refusing to bias samples");
    if (y < g) return u;
  }
  throw SamplingError("rejection sampling exceeded " + std::to_string(max_attempts) +
                      " attempts (component " + std::to_string(i) + ")");
}

BanditModel::BanditModel(std::vector<ArmDistribution> arms_in, std::string label_in)
    : arms(std::move(arms_in)), label(std::move(label_in)) {
  if (arms.size() < 2) throw InputError("a bandit model needs at least two arms");
}

std::vector<double> sample(const BanditModel& model, Rng& rng, std::uint64_t max_attempts) {
  std::vector<double> rewards;
  rewards.reserve(model.arms.size());
  for (std::size_t k = 0; k < model.arms.size(); ++k) {
    try {
      rewards.push_back(model.arms[k].sample(rng, max_attempts));
    } catch (const SamplingError& e) {
      throw SamplingError(std::string(e.what()) + " (arm " + std::to_string(k) + ")");
    }
  }
  return rewards;
}

std::vector<double> quadrature_breakpoints(const ArmDistribution& arm, double lo, double hi) {
  std::vector<double> points;
  auto push = [&](double x) {
    if (x > lo && x < hi) points.push_back(x);
  };
  push(arm.support_lo());
  push(arm.support_hi());
  for (const ArmComponent& c : arm.components()) {
    if (c.kind != ArmComponent::Kind::kTruncatedGaussian) continue;
    const double sigma = 1.0 / std::sqrt(2.0 * c.scale);
    push(c.mean);
    push(c.mean - sigma);
    push(c.mean + sigma);
    push(c.mean - 3.0 * sigma);
    push(c.mean + 3.0 * sigma);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

double expect(const ArmDistribution& arm, const std::function<double(double)>& g, double tol) {
  const double lo = arm.support_lo();
  const double hi = arm.support_hi();
  auto integrand = [&](double u) { return g(u) * arm.pdf(u); };
  return adaptive_simpson_segmented(integrand, lo, hi, quadrature_breakpoints(arm, lo, hi), tol);
}

Moments moments_oracle(const ArmDistribution& arm) {
  Moments m;
  m.mean = expect(arm, [](double u) { return u; });
  const double mean = m.mean;
  m.variance = std::max(0.0, expect(arm, [mean](double u) {
                          const double d = u - mean;
                          return d * d;
                        }));
  return m;
}

double central_moment_oracle(const ArmDistribution& arm, int order) {
  if (order < 1) throw InputError("central moment order must be >= 1");
  const double mean = expect(arm, [](double u) { return u; });
  return expect(arm, [mean, order](double u) { return std::pow(u - mean, order); });
}

namespace {

WinProbabilities oracle_quadrature_m1(const BanditModel& model) {
  const std::size_t arm_count = model.arms.size();
  WinProbabilities result;
  result.m = 1;
  result.method = EstimateMethod::kIndependentExact;
  result.values.resize(arm_count, 0.0);
  for (std::size_t k = 0; k < arm_count; ++k) {
    const ArmDistribution& arm = model.arms[k];
    const double lo = arm.support_lo();
    const double hi = arm.support_hi();
    std::vector<double> breaks = quadrature_breakpoints(arm, lo, hi);
    for (std::size_t j = 0; j < arm_count; ++j) {
      if (j == k) continue;
      for (double x : quadrature_breakpoints(model.arms[j], lo, hi)) breaks.push_back(x);
    }
    auto integrand = [&](double u) {
      double density = arm.pdf(u);
      if (density == 0.0) return 0.0;
      for (std::size_t j = 0; j < arm_count; ++j) {
        if (j == k) continue;
        density *= model.arms[j].cdf(u);
        if (density == 0.0) break;
      }
      return density;
    };
    const double p = adaptive_simpson_segmented(integrand, lo, hi, breaks, 1e-8);
    result.values[k] = std::clamp(p, 0.0, 1.0);
  }
  return result;
}

WinProbabilities oracle_monte_carlo(const BanditModel& model, int m, const OracleOptions& options) {
  const std::size_t arm_count = model.arms.size();
  const std::uint64_t draws = std::max<std::uint64_t>(options.mc_draws, 10'000'000);
  const int chunks = std::max(1, options.chunks);
  std::vector<std::vector<std::uint64_t>> chunk_counts(
      chunks, std::vector<std::uint64_t>(arm_count, 0));

  auto run_chunk = [&](int chunk) {
    const std::uint64_t begin = draws * static_cast<std::uint64_t>(chunk) / chunks;
    const std::uint64_t end = draws * (static_cast<std::uint64_t>(chunk) + 1) / chunks;
    Rng rng(derive_stream_seed(options.seed ^ (0x9e3779b97f4a7c15ULL * (m + 1)), chunk));
    std::vector<double> sums(arm_count);
    auto& counts = chunk_counts[chunk];
    for (std::uint64_t t = begin; t < end; ++t) {
      for (std::size_t k = 0; k < arm_count; ++k) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += model.arms[k].sample(rng);
        sums[k] = s;
      }
      const double top = *std::max_element(sums.begin(), sums.end());
      for (std::size_t k = 0; k < arm_count; ++k)
        if (sums[k] == top) ++counts[k];
    }
  };

  int threads = options.threads > 0 ? options.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, chunks);
  if (threads == 1) {
    for (int c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (int c = w; c < chunks; c += threads) run_chunk(c);
      });
    for (auto& t : pool) t.join();
  }

  WinProbabilities result;
  result.m = m;
  result.method = EstimateMethod::kIndependentSampled;
  result.samples_used = draws;
  result.values.resize(arm_count, 0.0);
  result.std_errors.resize(arm_count, 0.0);
  for (std::size_t k = 0; k < arm_count; ++k) {
    std::uint64_t total = 0;
    for (int c = 0; c < chunks; ++c) total += chunk_counts[c][k];
    const double p = static_cast<double>(total) / static_cast<double>(draws);
    result.values[k] = p;
    result.std_errors[k] = std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
  }
  return result;
}

}  // namespace

WinProbabilities win_probability_oracle(const BanditModel& model, int m,
                                        const OracleOptions& options) {
  if (m < 1) throw InputError("exploitation length m must be >= 1");
  if (m == 1) return oracle_quadrature_m1(model);
  return oracle_monte_carlo(model, m, options);
}

double cvar_oracle(const ArmDistribution& arm, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw InputError("cvar alpha must lie in (0, 1)");
  const double lo = arm.support_lo();
  const double hi = arm.support_hi();
  const double quantile =
      bisect_monotone([&](double u) { return arm.cdf(u) - alpha; }, lo, hi);
  auto integrand = [&](double u) { return u * arm.pdf(u); };
  const double tail =
      adaptive_simpson_segmented(integrand, lo, quantile,
                                 quadrature_breakpoints(arm, lo, quantile), 1e-10);
  return tail / alpha;
}

}  // namespace etcb
