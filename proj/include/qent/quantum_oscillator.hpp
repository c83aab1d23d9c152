#pragma once

// Transition probabilities of the driven quantum oscillator,
//   |a_nm|^2 = e^{-W} W^{m+n} / (m! n!) C(m, n | W)^2,
// with C the Charlier polynomials, and the microcanonical / canonical
// expectation values of ln(N + 1/2) they produce.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <numbers>
#include <vector>

#include "error.hpp"

namespace qent {

struct TruncationPolicy {
  double tail_mass = 1e-12;
  std::size_t hard_cap = 5000;
  /// When set, every row is summed over exactly m = 0..*fixed_cut instead of
  /// stopping once the tail is below tail_mass. The captured mass must still
  /// reach 1 - tail_mass.
  std::optional<std::size_t> fixed_cut;

  void validate() const {
    if (!(tail_mass > 0.0 && tail_mass < 1.0)) throw InvalidArgument("tail_mass must lie in (0, 1)");
    if (hard_cap < 1) throw InvalidArgument("hard_cap must be at least 1");
  }

  static TruncationPolicy fixed(std::size_t m_trunc, double tail_mass = 1e-12) {
    return {tail_mass, m_trunc, m_trunc};
  }
};

/// C(m, n | W) = sum_l (-1)^l m! n! / (l! (m-l)! (n-l)! W^l), summed term by
/// term as written. Symmetric in (m, n). `Real` may be a multiprecision type.
/// Meant for small arguments; throws when the double result is not finite.
template <class Real = double>
Real charlier_direct(std::size_t m, std::size_t n, Real work) {
  if (!(work > Real(0))) throw InvalidArgument("Charlier polynomial needs W > 0");
  const std::size_t top = std::min(m, n);
  Real term(1);  // l = 0
  Real sum(1);
  for (std::size_t l = 0; l < top; ++l) {
    // term_{l+1} / term_l = -(m - l)(n - l) / ((l + 1) W)
    term = -term * Real(m - l) * Real(n - l) / (Real(l + 1) * work);
    sum += term;
  }
  if constexpr (std::is_floating_point_v<Real>) {
    if (!std::isfinite(sum))
      throw InvalidArgument("Charlier sum overflowed for m = " + std::to_string(m) +
                            ", n = " + std::to_string(n));
  }
  return sum;
}

namespace detail {

// lgamma(x + 1) - (x + 1/2) ln x + x - ln(2 pi) / 2 for integer x >= 1.
inline double stirling_remainder(double x) {
  if (x <= 15.0) {
    long double r = std::lgamma(static_cast<long double>(x) + 1.0L) - (x + 0.5L) * std::log(static_cast<long double>(x)) + x -
                    0.5L * std::log(2.0L * std::numbers::pi_v<long double>);
    return static_cast<double>(r);
  }
  const double x2 = x * x;
  constexpr double s0 = 1.0 / 12, s1 = 1.0 / 360, s2 = 1.0 / 1260, s3 = 1.0 / 1680, s4 = 1.0 / 1188;
  return (s0 - (s1 - (s2 - (s3 - s4 / x2) / x2) / x2) / x2) / x;
}

// x ln(x / mu) + mu - x without cancellation when x is close to mu.
inline double deviance_term(double x, double mu) {
  if (std::abs(x - mu) < 0.1 * (x + mu)) {
    const double v = (x - mu) / (x + mu);
    double sum = (x - mu) * v;
    double ej = 2.0 * x * v;
    const double v2 = v * v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v2;
      const double next = sum + ej / (2 * j + 1);
      if (next == sum) return sum;
      sum = next;
    }
    return sum;
  }
  return x * std::log(x / mu) + mu - x;
}

// ln(e^{-mu} mu^x / x!) with relative accuracy independent of x.
inline double log_poisson(double x, double mu) {
  if (x == 0.0) return -mu;
  return -stirling_remainder(x) - deviance_term(x, mu) - 0.5 * std::log(2.0 * std::numbers::pi * x);
}

}  // namespace detail

/// Signed transition amplitude a_nm = sqrt(e^{-W} W^{m+n}/(m! n!)) C(m,n|W),
/// kept as sign and log-magnitude so it never over- or underflows.
struct TransitionAmplitude {
  int sign = 0;  // 0 when the amplitude is exactly zero
  double log_magnitude = -std::numeric_limits<double>::infinity();
  /// Ratio of the summed magnitudes entering the last recurrence step to the
  /// magnitude of its result; log10 of it estimates the digits lost to
  /// cancellation.
  double cancellation = 1.0;

  double probability() const { return sign == 0 ? 0.0 : std::exp(2.0 * log_magnitude); }
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }
};

/// Stable evaluation valid for m, n in the thousands. With x = max(m, n)
/// fixed, the amplitudes b_k (k = degree) obey
///   b_{k+1} = ((k + W - x) b_k - sqrt(k W) b_{k-1}) / sqrt(W (k + 1)),
/// run for k < min(m, n) <= x. That range never passes the upper turning
/// point (sqrt x + sqrt W)^2, so the forward direction is the stable one.
/// b_0 = sqrt(Poisson(x; W)) enters only through its logarithm and the
/// recurrence is rescaled by powers of two.
inline TransitionAmplitude transition_amplitude(std::size_t n, std::size_t m, double work) {
  if (!(work >= 0.0) || !std::isfinite(work)) throw InvalidArgument("W must be finite and non-negative");
  TransitionAmplitude out;
  if (work == 0.0) {
    if (n == m) out = {1, 0.0, 1.0};
    return out;
  }
  const std::size_t degree = std::min(n, m);
  const double x = static_cast<double>(std::max(n, m));
  const double log_b0 = 0.5 * detail::log_poisson(x, work);

  constexpr int kChunk = 512;
  const double big = std::ldexp(1.0, kChunk);
  const double small = std::ldexp(1.0, -kChunk);
  long exponent = 0;  // true b = scaled b * 2^exponent
  double prev = 0.0;
  double cur = 1.0;
  double cancellation = 1.0;
  for (std::size_t k = 0; k < degree; ++k) {
    const double kd = static_cast<double>(k);
    const double t1 = (kd + work - x) * cur;
    const double t2 = std::sqrt(kd * work) * prev;
    const double numer = t1 - t2;
    cancellation = numer != 0.0 ? (std::abs(t1) + std::abs(t2)) / std::abs(numer)
                                : std::numeric_limits<double>::infinity();
    prev = cur;
    cur = numer / std::sqrt(work * (kd + 1.0));
    const double mag = std::max(std::abs(cur), std::abs(prev));
    if (mag > big) {
      cur *= small;
      prev *= small;
      exponent += kChunk;
    } else if (mag != 0.0 && mag < small) {
      cur *= big;
      prev *= big;
      exponent -= kChunk;
    }
  }
  out.cancellation = cancellation;
  if (cur == 0.0) return out;
  out.sign = cur > 0 ? 1 : -1;
  out.log_magnitude = log_b0 + static_cast<double>(exponent) * std::log(2.0) + std::log(std::abs(cur));
  return out;
}

/// |a_nm|^2 for the driven oscillator. W = 0 gives delta_{nm}. Exactly
/// symmetric in (n, m).
inline double transition_probability(std::size_t n, std::size_t m, double work) {
  return std::min(1.0, transition_amplitude(n, m, work).probability());
}

/// Adaptive rows keep extending until the last probability is below this.
inline constexpr double kNegligibleTerm = 1e-18;

struct TransitionRow {
  std::size_t n = 0;
  double work = 0.0;
  std::vector<double> probabilities;  // index m = 0..M
  double captured_mass = 0.0;
};

/// Row n of the transition matrix, extended in m until the captured mass
/// reaches 1 - tail_mass and the terms have become negligible (or over exactly 0..fixed_cut when the policy says
/// so). Throws TruncationError if hard_cap is reached first.
inline TransitionRow transition_row(std::size_t n, double work, const TruncationPolicy& policy) {
  policy.validate();
  TransitionRow row;
  row.n = n;
  row.work = work;
  const double target = 1.0 - policy.tail_mass;
  double mass = 0.0;
  if (policy.fixed_cut) {
    row.probabilities.reserve(*policy.fixed_cut + 1);
    for (std::size_t m = 0; m <= *policy.fixed_cut; ++m) {
      row.probabilities.push_back(transition_probability(n, m, work));
      mass += row.probabilities.back();
    }
  } else {
    for (std::size_t m = 0; m <= policy.hard_cap; ++m) {
      row.probabilities.push_back(transition_probability(n, m, work));
      mass += row.probabilities.back();
      // Past the peak the row decays faster than geometrically, so a
      // negligible last term bounds the omitted tail. Without it a row with
      // tiny W could drop terms that dominate its entropy change.
      if (mass >= target && static_cast<double>(m) > static_cast<double>(n) + work &&
          row.probabilities.back() < kNegligibleTerm)
        break;
    }
  }
  row.captured_mass = mass;
  if (mass < target)
    throw TruncationError("row n = " + std::to_string(n) + ", W = " + std::to_string(work) +
                              " captured mass " + std::to_string(mass) + " by m = " +
                              std::to_string(row.probabilities.size() - 1),
                          mass);
  return row;
}

struct QuantumMicrocanonicalStats {
  double mean = 0.0;      // <m>_n, closed form n + W
  double variance = 0.0;  // closed form 2 (n + 1/2) W
  double entropy = 0.0;   // <ln(m + 1/2)>_n
  double entropy_gain = 0.0;  // <ln((m + 1/2)/(n + 1/2))>_n, summed termwise
  double captured_mass = 0.0;
};

inline QuantumMicrocanonicalStats microcanonical_stats(const TransitionRow& row) {
  QuantumMicrocanonicalStats s;
  const double level = static_cast<double>(row.n) + 0.5;
  for (std::size_t m = 0; m < row.probabilities.size(); ++m) {
    const double p = row.probabilities[m];
    const double md = static_cast<double>(m);
    s.mean += p * md;
    s.entropy += p * std::log(md + 0.5);
    if (m != row.n) s.entropy_gain += p * std::log((md + 0.5) / level);
  }
  for (std::size_t m = 0; m < row.probabilities.size(); ++m) {
    const double d = static_cast<double>(m) - s.mean;
    s.variance += row.probabilities[m] * d * d;
  }
  s.captured_mass = row.captured_mass;
  return s;
}

inline QuantumMicrocanonicalStats quantum_microcanonical_stats(std::size_t n, double work,
                                                              const TruncationPolicy& policy) {
  return microcanonical_stats(transition_row(n, work, policy));
}

struct CanonicalDeltaS {
  double delta_S = 0.0;
  /// Upper bound on the omitted levels n > n_trunc, from
  /// <ln(m+1/2)>_n - ln(n+1/2) <= ln(1 + W/(n+1/2)) <= W/(n+1/2).
  double tail_bound = 0.0;
};

/// (1 - e^{-beta}) sum_{n=0}^{n_trunc} e^{-beta n} [<ln(m+1/2)>_n - ln(n+1/2)].
inline CanonicalDeltaS quantum_canonical_delta_S(double beta_temp, double work, std::size_t n_trunc,
                                                 const TruncationPolicy& policy) {
  if (!(beta_temp > 0.0)) throw InvalidArgument("inverse temperature must be positive");
  if (n_trunc < 1) throw InvalidArgument("n_trunc must be at least 1");
  CanonicalDeltaS out;
  if (work == 0.0) return out;
  const double norm = -std::expm1(-beta_temp);
  for (std::size_t n = 0; n <= n_trunc; ++n) {
    const double weight = norm * std::exp(-beta_temp * static_cast<double>(n));
    if (weight == 0.0) break;
    out.delta_S += weight * quantum_microcanonical_stats(n, work, policy).entropy_gain;
  }
  const double next = static_cast<double>(n_trunc + 1);
  out.tail_bound = std::exp(-beta_temp * next) * work / (next + 0.5);
  return out;
}

}  // namespace qent
