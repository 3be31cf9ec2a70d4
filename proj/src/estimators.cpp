#include "etcb/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "etcb/errors.hpp"
#include "etcb/rng.hpp"

namespace etcb {

std::string to_string(EstimateMethod method) {
  switch (method) {
    case EstimateMethod::kIndependentExact: return "independent-exact";
    case EstimateMethod::kIndependentSampled: return "independent-sampled";
    case EstimateMethod::kPaired: return "paired";
  }
  return "unknown";
}

ExplorationLog::ExplorationLog(std::size_t rows, std::size_t arms, std::vector<double> row_major,
                               bool paired)
    : rows_(rows), arms_(arms), paired_(paired), data_(std::move(row_major)) {
  if (rows_ < 1) throw InputError("exploration log needs at least one row");
  if (arms_ < 2) throw InputError("exploration log needs at least two arms");
  if (data_.size() != rows_ * arms_)
    throw InputError("exploration log size does not match rows * arms");
  for (double v : data_)
    if (!std::isfinite(v)) throw InputError("exploration log contains a non-finite reward");
}

ExplorationLog ExplorationLog::from_rows(const std::vector<std::vector<double>>& rows,
                                         bool paired) {
  if (rows.empty()) throw InputError("exploration log needs at least one row");
  const std::size_t arms = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * arms);
  for (const auto& row : rows) {
    if (row.size() != arms) throw InputError("exploration log rows have unequal arm counts");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return ExplorationLog(rows.size(), arms, std::move(flat), paired);
}

std::vector<double> ExplorationLog::arm_column(std::size_t arm) const {
  std::vector<double> column(rows_);
  for (std::size_t r = 0; r < rows_; ++r) column[r] = at(r, arm);
  return column;
}

namespace {

// #{values in sorted column <= x}
std::uint64_t count_leq(const std::vector<double>& sorted, double x) {
  return static_cast<std::uint64_t>(std::upper_bound(sorted.begin(), sorted.end(), x) -
                                    sorted.begin());
}

// Refuses sizes whose tuple total C^K cannot be held exactly in 128 bits.
void require_tuple_capacity(std::uint64_t per_arm, std::size_t arms) {
  double bits = static_cast<double>(arms) * std::log2(static_cast<double>(per_arm) + 1.0);
  if (bits >= 126.0)
    throw CapacityError("tuple count " + std::to_string(per_arm) + "^" + std::to_string(arms) +
                        " exceeds exact 128-bit accounting");
}

// counts[k] = #{tuples picking one value per column : column k's pick weakly
// dominates every other pick, and >= threshold when given}. The rank-counting
// identity turns the C^K enumeration into sorts plus binary searches.
std::vector<u128> dominance_counts(const std::vector<std::vector<double>>& columns,
                                   std::optional<double> threshold) {
  const std::size_t arms = columns.size();
  const std::uint64_t per_arm = columns.front().size();
  require_tuple_capacity(per_arm, arms);

  std::vector<std::vector<double>> sorted(columns);
  for (auto& column : sorted) std::sort(column.begin(), column.end());

  std::vector<u128> counts(arms, 0);
  for (std::size_t k = 0; k < arms; ++k) {
    u128 total = 0;
    for (double v : columns[k]) {
      if (threshold && v < *threshold) continue;
      u128 product = 1;
      for (std::size_t j = 0; j < arms; ++j) {
        if (j == k) continue;
        product *= count_leq(sorted[j], v);
        if (product == 0) break;
      }
      total += product;
    }
    counts[k] = total;
  }
  return counts;
}

u128 ipow128(std::uint64_t base, std::size_t exponent) {
  u128 result = 1;
  for (std::size_t i = 0; i < exponent; ++i) result *= base;
  return result;
}

WinProbabilities from_counts(std::vector<u128> counts, u128 denominator, int m,
                             EstimateMethod method, std::uint64_t samples_used) {
  WinProbabilities result;
  result.m = m;
  result.method = method;
  result.samples_used = samples_used;
  result.counts = std::move(counts);
  result.denominator = denominator;
  result.values.reserve(result.counts.size());
  for (u128 c : result.counts)
    result.values.push_back(static_cast<double>(c) / static_cast<double>(denominator));
  return result;
}

// counts[k] = #{rows/columns where arm k's entry is the row's weak maximum}.
std::vector<u128> paired_counts(const std::vector<std::vector<double>>& columns) {
  const std::size_t arms = columns.size();
  const std::size_t rows = columns.front().size();
  std::vector<u128> counts(arms, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    double top = columns[0][r];
    for (std::size_t k = 1; k < arms; ++k) top = std::max(top, columns[k][r]);
    for (std::size_t k = 0; k < arms; ++k)
      if (columns[k][r] == top) ++counts[k];
  }
  return counts;
}

}  // namespace

WinProbabilities estimate_ote_independent(const ExplorationLog& log,
                                          std::optional<double> threshold) {
  if (threshold && !std::isfinite(*threshold)) throw InputError("threshold must be finite");
  std::vector<std::vector<double>> columns;
  columns.reserve(log.arms());
  for (std::size_t k = 0; k < log.arms(); ++k) columns.push_back(log.arm_column(k));
  auto counts = dominance_counts(columns, threshold);
  return from_counts(std::move(counts), ipow128(log.rows(), log.arms()), 1,
                     EstimateMethod::kIndependentExact, log.rows());
}

WinProbabilities estimate_ote_paired(const ExplorationLog& log) {
  if (!log.paired()) throw InputError("paired estimator needs a paired exploration log");
  std::vector<std::vector<double>> columns;
  columns.reserve(log.arms());
  for (std::size_t k = 0; k < log.arms(); ++k) columns.push_back(log.arm_column(k));
  return from_counts(paired_counts(columns), log.rows(), 1, EstimateMethod::kPaired, log.rows());
}

std::uint64_t binomial_within_cap(std::size_t n, std::size_t m, std::uint64_t cap) {
  if (m > n) throw InputError("subset size m exceeds the number of rows");
  m = std::min(m, n - m);
  // C(n, m) grows monotonically along the multiplicative recurrence; bail out
  // as soon as the running value exceeds the cap.
  u128 c = 1;
  for (std::size_t i = 1; i <= m; ++i) {
    c = c * (n - m + i) / i;  // exact: c * (n-m+i) is divisible by i at this step
    if (c > cap)
      throw CapacityError("C(" + std::to_string(n) + ", " + std::to_string(m) + ") exceeds cap " +
                          std::to_string(cap) + "; use the budgeted sampled estimator");
  }
  return static_cast<std::uint64_t>(c);
}

std::vector<std::size_t> nth_subset_lex(std::size_t n, std::size_t m, std::uint64_t index) {
  // Unranking in lexicographic order of ascending index tuples.
  std::vector<std::size_t> subset;
  subset.reserve(m);
  std::size_t next = 0;
  std::uint64_t remaining = index;
  for (std::size_t slot = 0; slot < m; ++slot) {
    for (std::size_t candidate = next;; ++candidate) {
      const std::size_t tail = m - slot - 1;
      if (n - candidate - 1 < tail) throw InputError("subset index out of range");
      const std::uint64_t block =
          binomial_within_cap(n - candidate - 1, tail, std::numeric_limits<std::uint64_t>::max());
      if (remaining < block) {
        subset.push_back(candidate);
        next = candidate + 1;
        break;
      }
      remaining -= block;
    }
  }
  return subset;
}

MSumSet build_m_sums(const ExplorationLog& log, int m, std::uint64_t cap) {
  if (m < 1) throw InputError("subset size m must be >= 1");
  if (static_cast<std::size_t>(m) > log.rows())
    throw InputError("subset size m exceeds the number of exploration rows");
  const std::size_t arms = log.arms();
  const std::uint64_t combos = binomial_within_cap(log.rows(), m, cap);

  MSumSet set;
  set.arms = arms;
  set.combos = combos;
  set.m = m;
  set.sums.assign(arms * combos, 0.0);

  // Lexicographic subset walk shared by every arm; sums accumulate in
  // ascending row order so repeated runs are bit-identical.
  std::vector<std::size_t> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;
  const std::size_t rows = log.rows();
  for (std::uint64_t j = 0;; ++j) {
    for (std::size_t k = 0; k < arms; ++k) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += log.at(idx[i], k);
      set.sums[k * combos + j] = s;
    }
    // advance to the next lexicographic subset
    int pivot = m - 1;
    while (pivot >= 0 && idx[pivot] == rows - m + pivot) --pivot;
    if (pivot < 0) break;
    ++idx[pivot];
    for (int i = pivot + 1; i < m; ++i) idx[i] = idx[i - 1] + 1;
  }
  return set;
}

namespace {

// Uniform m-subset of {0..n-1} via partial Fisher-Yates on a caller-provided
// index pool (restored lazily between draws).
void sample_subset(std::vector<std::size_t>& pool, std::size_t m, Rng& rng,
                   std::vector<std::size_t>& out) {
  const std::size_t n = pool.size();
  out.clear();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
}

WinProbabilities estimate_fte_sampled(const ExplorationLog& log, int m, bool paired,
                                      std::uint64_t budget, std::uint64_t subset_seed) {
  if (budget == 0) throw InputError("sampled estimator budget must be positive");
  const std::size_t arms = log.arms();
  Rng rng(mix64(subset_seed));
  std::vector<std::size_t> pool(log.rows());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  std::vector<std::size_t> subset;
  std::vector<double> sums(arms);
  std::vector<std::uint64_t> counts(arms, 0);
  for (std::uint64_t t = 0; t < budget; ++t) {
    if (paired) {
      sample_subset(pool, m, rng, subset);
      std::sort(subset.begin(), subset.end());
      for (std::size_t k = 0; k < arms; ++k) {
        double s = 0.0;
        for (std::size_t row : subset) s += log.at(row, k);
        sums[k] = s;
      }
    } else {
      for (std::size_t k = 0; k < arms; ++k) {
        sample_subset(pool, m, rng, subset);
        std::sort(subset.begin(), subset.end());
        double s = 0.0;
        for (std::size_t row : subset) s += log.at(row, k);
        sums[k] = s;
      }
    }
    const double top = *std::max_element(sums.begin(), sums.end());
    for (std::size_t k = 0; k < arms; ++k)
      if (sums[k] == top) ++counts[k];
  }
  WinProbabilities result;
  result.m = m;
  result.method = paired ? EstimateMethod::kPaired : EstimateMethod::kIndependentSampled;
  result.samples_used = budget;
  result.values.reserve(arms);
  result.std_errors.reserve(arms);
  for (std::size_t k = 0; k < arms; ++k) {
    const double p = static_cast<double>(counts[k]) / static_cast<double>(budget);
    result.values.push_back(p);
    result.std_errors.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(budget)));
  }
  return result;
}

}  // namespace

WinProbabilities estimate_fte(const ExplorationLog& log, int m, bool paired,
                              std::optional<std::uint64_t> budget, std::uint64_t cap,
                              std::uint64_t subset_seed) {
  if (paired && !log.paired())
    throw InputError("paired estimator needs a paired exploration log");
  if (m < 1) throw InputError("exploitation length m must be >= 1");
  if (static_cast<std::size_t>(m) > log.rows())
    throw InputError("exploitation length m exceeds the number of exploration rows");

  bool exact_fits = true;
  try {
    binomial_within_cap(log.rows(), m, cap);
  } catch (const CapacityError&) {
    exact_fits = false;
  }
  if (!exact_fits) {
    if (!budget)
      throw CapacityError("C(" + std::to_string(log.rows()) + ", " + std::to_string(m) +
                          ") exceeds cap " + std::to_string(cap) +
                          "; pass a budget to sample subset tuples instead");
    return estimate_fte_sampled(log, m, paired, *budget, subset_seed);
  }

  const MSumSet set = build_m_sums(log, m, cap);
  std::vector<std::vector<double>> columns(set.arms);
  for (std::size_t k = 0; k < set.arms; ++k)
    columns[k].assign(set.sums.begin() + k * set.combos,
                      set.sums.begin() + (k + 1) * set.combos);
  if (paired) {
    auto counts = paired_counts(columns);
    return from_counts(std::move(counts), set.combos, m, EstimateMethod::kPaired, set.combos);
  }
  auto counts = dominance_counts(columns, std::nullopt);
  return from_counts(std::move(counts), ipow128(set.combos, set.arms), m,
                     EstimateMethod::kIndependentExact, set.combos);
}

std::int64_t sample_size_ote(int arms, double epsilon_r, double delta_p) {
  if (arms < 2) throw InputError("arms must be >= 2");
  if (!(epsilon_r > 0.0) || !(epsilon_r < 1.0))
    throw InputError("epsilon_r must lie in (0, 1)");
  if (!(delta_p > 0.0) || !(delta_p <= 1.0)) throw InputError("delta_p must lie in (0, 1]");
  const double bound = 2.0 * std::log(2.0 * arms / epsilon_r) / (delta_p * delta_p);
  // tiny guard so exact-integer bounds are not pushed up by the last ulp
  const double n = std::ceil(bound - 1e-9);
  if (n >= 9.2e18) throw CapacityError("required exploration size overflows 64 bits");
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

std::int64_t sample_size_fte(int arms, double epsilon_r, double delta_p, int m) {
  if (m < 1) throw InputError("exploitation length m must be >= 1");
  const std::int64_t per_round = sample_size_ote(arms, epsilon_r, delta_p);
  if (per_round > std::numeric_limits<std::int64_t>::max() / m)
    throw CapacityError("required exploration size overflows 64 bits");
  // smallest N with floor(N / m) >= per_round
  return per_round * static_cast<std::int64_t>(m);
}

}  // namespace etcb
