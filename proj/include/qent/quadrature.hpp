#pragma once

// Double-exponential (tanh-sinh) quadrature and composite Newton-Cotes rules.
// Tanh-sinh never evaluates the endpoints and clusters nodes there
// double-exponentially, which is what the logarithmic endpoint singularities
// of the oscillator averages need.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>

#include "error.hpp"

namespace qent::quad {

struct Estimate {
  double value = 0.0;
  double error = 0.0;  // |difference| between the last two refinement levels
  std::size_t evaluations = 0;
};

namespace detail {

// Abscissa and weight of the tanh-sinh map t -> x in [a, b], with the
// distances to both endpoints computed without cancellation.
struct Node {
  double from_a;
  double from_b;
  double weight;  // dx/dt
};

inline Node tanh_sinh_node(double t, double width) {
  const double s = std::numbers::pi / 2 * std::sinh(t);
  const double e = std::exp(-2.0 * std::abs(s));
  // sigma(2s) and sigma(-2s); the smaller one is evaluated directly.
  const double small = e / (1.0 + e);
  const double large = 1.0 / (1.0 + e);
  const double lo = s < 0 ? small : large;
  const double hi = s < 0 ? large : small;
  return {width * lo, width * hi,
          width * 2.0 * lo * hi * (std::numbers::pi / 2) * std::cosh(t)};
}

// Half-width of the t-range. Beyond this the nodes are closer to the
// endpoints than double precision can represent relative to the interval.
inline constexpr double kTanhSinhRange = 4.0;

template <class F>
double tanh_sinh_sum(F& f, double a, double b, double h, double offset, std::size_t& evals) {
  const double width = b - a;
  double sum = 0.0;
  for (std::size_t k = 0;; ++k) {
    const double t = offset + h * static_cast<double>(k);
    if (t > kTanhSinhRange) break;
    for (double sign : {1.0, -1.0}) {
      if (t == 0.0 && sign < 0) continue;
      const Node n = tanh_sinh_node(sign * t, width);
      if (n.from_a <= 0.0 || n.from_b <= 0.0 || n.weight == 0.0) continue;
      const double x = n.from_a <= n.from_b ? a + n.from_a : b - n.from_b;
      if (x <= a || x >= b) continue;  // rounded onto an endpoint
      sum += f(x) * n.weight;
      ++evals;
    }
  }
  return sum;
}

}  // namespace detail

/// Adaptive tanh-sinh: halves the step until two successive levels agree to
/// `rel_tol` (relative to the integral, with `abs_tol` as floor).
template <class F>
Estimate tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-13, double abs_tol = 1e-15,
                   int max_level = 10) {
  if (!(b > a)) throw InvalidArgument("tanh_sinh requires a < b");
  Estimate est;
  double h = 0.5;
  double sum = detail::tanh_sinh_sum(f, a, b, h, 0.0, est.evaluations);
  double value = h * sum;
  for (int level = 1; level <= max_level; ++level) {
    // Only the odd multiples of the new step are new nodes.
    sum += detail::tanh_sinh_sum(f, a, b, h, h / 2, est.evaluations);
    h /= 2;
    const double refined = h * sum;
    est.error = std::abs(refined - value);
    value = refined;
    if (level >= 3 && est.error <= std::max(rel_tol * std::abs(value), abs_tol)) break;
  }
  est.value = value;
  return est;
}

/// Fixed tanh-sinh rule with `nodes` equally spaced t-samples (odd counts
/// include the midpoint). The error estimate compares against the rule on
/// every other node.
template <class F>
Estimate tanh_sinh_fixed(F&& f, double a, double b, std::size_t nodes) {
  if (!(b > a)) throw InvalidArgument("tanh_sinh_fixed requires a < b");
  if (nodes < 4) throw InvalidArgument("tanh_sinh_fixed needs at least 4 nodes");
  const double range = detail::kTanhSinhRange;
  const double h = 2 * range / static_cast<double>(nodes - 1);
  const double width = b - a;
  Estimate est;
  double fine = 0.0;
  double coarse = 0.0;
  for (std::size_t k = 0; k < nodes; ++k) {
    const double t = -range + h * static_cast<double>(k);
    const detail::Node n = detail::tanh_sinh_node(t, width);
    if (n.from_a <= 0.0 || n.from_b <= 0.0 || n.weight == 0.0) continue;
    const double x = n.from_a <= n.from_b ? a + n.from_a : b - n.from_b;
    if (x <= a || x >= b) continue;
    const double v = f(x) * n.weight;
    ++est.evaluations;
    fine += v;
    if (k % 2 == 0) coarse += v;
  }
  est.value = h * fine;
  est.error = std::abs(est.value - 2 * h * coarse);
  return est;
}

/// Composite Simpson over uniformly spaced samples. An even
/// sample count closes with the 3/8 rule over the last three intervals.
template <class T>
T composite_simpson(std::span<const T> samples, double step) {
  const std::size_t n = samples.size();
  if (n < 2) throw InvalidArgument("need at least two samples");
  if (n == 2) return step * (samples[0] + samples[1]) / 2.0;
  if (n == 3) return step / 3.0 * (samples[0] + 4.0 * samples[1] + samples[2]);

  const std::size_t simpson_end = (n % 2 == 1) ? n - 1 : n - 4;
  T total = samples[0] * 0.0;
  if (simpson_end > 0) {
    T acc = samples[0] + samples[simpson_end];
    for (std::size_t i = 1; i < simpson_end; ++i) acc += (i % 2 ? 4.0 : 2.0) * samples[i];
    total = step / 3.0 * acc;
  }
  if (n % 2 == 0) {
    const std::size_t j = n - 4;
    total += 3.0 * step / 8.0 *
             (samples[j] + 3.0 * samples[j + 1] + 3.0 * samples[j + 2] + samples[j + 3]);
  }
  return total;
}

}  // namespace qent::quad
