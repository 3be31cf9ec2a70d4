#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "etcb/errors.hpp"

namespace etcb {

namespace detail {

inline double simpson_estimate(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_rec(const F& f, double a, double fa, double b, double fb, double m,
                            double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_estimate(a, fa, m, fm, flm);
  const double right = simpson_estimate(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) throw NumericError("adaptive quadrature did not converge");
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol, int max_depth = 60) {
  if (!(a <= b)) throw InputError("quadrature interval is reversed");
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  const double whole = detail::simpson_estimate(a, fa, b, fb, fm);
  return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

// Quadrature over [a, b] with interior breakpoints (kinks, narrow modes) the
// adaptive rule must not step over; `tol` is the total absolute tolerance,
// split evenly across the pieces. Breakpoints outside (a, b) are ignored.
template <class F>
double adaptive_simpson_segmented(const F& f, double a, double b, std::vector<double> breakpoints,
                                  double tol) {
  if (!(a <= b)) throw InputError("quadrature interval is reversed");
  std::vector<double> edges;
  edges.push_back(a);
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double x : breakpoints)
    if (x > edges.back() && x < b) edges.push_back(x);
  edges.push_back(b);
  const double piece_tol = tol / static_cast<double>(edges.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    total += adaptive_simpson(f, edges[i], edges[i + 1], piece_tol);
  return total;
}

// Root of a monotone nondecreasing g on [lo, hi] with g(lo) <= 0 <= g(hi):
// returns x with g(x) ~= 0 located by bisection.
template <class G>
double bisect_monotone(const G& g, double lo, double hi, int iterations = 200) {
  double glo = g(lo);
  if (glo > 0.0) return lo;
  if (g(hi) < 0.0) return hi;
  double a = lo;
  double b = hi;
  for (int i = 0; i < iterations && b - a > 0.0; ++i) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;  // interval collapsed to adjacent doubles
    if (g(m) < 0.0)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

// log C(n, k) via lgamma; exact enough for tail sums up to n = 1e5.
inline double log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace etcb
