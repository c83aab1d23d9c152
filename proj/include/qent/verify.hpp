#pragma once

// Self-check suite run by `qent verify`: every invariant of the library on
// randomized or gridded inputs, each reduced to one named pass/fail check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "classical_oscillator.hpp"
#include "drive.hpp"
#include "majorization.hpp"
#include "parallel.hpp"
#include "quantum_oscillator.hpp"
#include "random.hpp"
#include "schrodinger.hpp"

namespace qent {

struct Check {
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;      // worst observed value of the checked quantity
  double threshold = 0.0;  // what `worst` was compared against
  std::string note;
};

struct VerificationReport {
  std::vector<Check> checks;
  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
};

inline constexpr std::array<std::size_t, 4> kTheoremDims{2, 8, 16, 64};

/// Entropy-increase theorem and partial-sum lemma on `trials` random
/// (decreasing p, unistochastic D) pairs, cycling through kTheoremDims.
/// `worst` is the smallest of delta S and the partial sums.
inline Check check_theorem(std::uint64_t seed, std::size_t trials) {
  struct Trial {
    double delta;
    double gap;
  };
  const auto results = parallel_map(trials, [&](std::size_t i) {
    const std::size_t dim = kTheoremDims[i % kTheoremDims.size()];
    auto rng = make_rng(seed, 2 * i);
    const auto p = random_decreasing_distribution(dim, rng);
    const auto d = random_unistochastic(dim, split_seed(seed, 2 * i + 1));
    const auto r = entropy_change(p, evolve_distribution(p, d));
    return Trial{r.delta_direct, r.min_cumulative_gap};
  });
  Check c{"entropy_increase_theorem", true, trials, 0, 0.0, -1e-12, ""};
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& t : results) {
    worst = std::min({worst, t.delta, t.gap});
    if (t.delta < c.threshold || t.gap < c.threshold) ++c.failures;
  }
  c.worst = worst;
  c.passed = c.failures == 0;
  c.note = "delta S and partial sums >= -1e-12 for decreasing p, dims 2/8/16/64";
  return c;
}

/// Direct and summation-by-parts entropy change agree on unordered pairs.
inline Check check_summation_by_parts(std::uint64_t seed, std::size_t trials) {
  const auto diffs = parallel_map(trials, [&](std::size_t i) {
    auto rng = make_rng(seed, 0x5eed0000ULL + i);
    const std::size_t dim = 2 + static_cast<std::size_t>(rng() % 63);
    const auto p = random_distribution(dim, rng);
    const auto q = random_distribution(dim, rng);
    const auto r = entropy_change(p, q);
    return std::abs(r.delta_direct - r.delta_by_parts);
  });
  Check c{"summation_by_parts_identity", true, trials, 0, 0.0, 1e-10, ""};
  for (double d : diffs) {
    c.worst = std::max(c.worst, d);
    if (d > c.threshold) ++c.failures;
  }
  c.passed = c.failures == 0;
  return c;
}

inline Check check_negative_control() {
  Check c{"rejects_non_doubly_stochastic", false, 1, 1, 0.0, 1e-9, ""};
  Eigen::MatrixXd bad(2, 2);
  bad << 0.9, 0.1, 0.2, 0.8;
  try {
    (void)check_doubly_stochastic(bad, 1e-9);
    c.note = "matrix with column sums 1.1, 0.9 was accepted";
  } catch (const NotDoublyStochastic& e) {
    c.passed = true;
    c.failures = 0;
    c.worst = std::abs(e.deviation());
    c.note = e.what();
  }
  return c;
}

/// Diagonal entropy moves under mixing; the von Neumann entropy is fixed by
/// the initial spectrum.
inline Check check_von_neumann_contrast(std::uint64_t seed) {
  auto rng = make_rng(seed, 0xc0ffeeULL);
  const auto p = random_decreasing_distribution(16, rng);
  const auto d = random_unistochastic(16, split_seed(seed, 0xc0ffeeULL + 1));
  const auto q = evolve_distribution(p, d);
  const double diag_change = diagonal_entropy(q) - diagonal_entropy(p);
  const double vn = von_neumann_entropy(p);
  Check c{"von_neumann_contrast", diag_change > 0.0, 1, diag_change > 0.0 ? 0u : 1u, diag_change, 0.0, ""};
  c.note = "diagonal entropy change " + std::to_string(diag_change) +
           ", von Neumann entropy of the spectrum " + std::to_string(vn) + " (invariant)";
  return c;
}

inline constexpr std::array<double, 4> kRowWorks{0.1, 1.0, 10.0, 44.41};

/// Row normalization and the moment identities <m> = n + W,
/// Var m = 2 (n + 1/2) W on levels n <= n_max.
inline std::array<Check, 2> check_rows_and_moments(std::size_t n_max = 50) {
  Check norm{"transition_row_normalization", true, 0, 0, 0.0, 1e-12, "1 - captured mass"};
  Check mom{"quantum_moment_identities", true, 0, 0, 0.0, 1e-8, "relative error of mean and variance"};
  const TruncationPolicy policy{};
  for (double w : kRowWorks) {
    for (std::size_t n = 0; n <= n_max; ++n) {
      const auto s = quantum_microcanonical_stats(n, w, policy);
      const double nd = static_cast<double>(n);
      const double lost = 1.0 - s.captured_mass;
      ++norm.cases;
      norm.worst = std::max(norm.worst, lost);
      if (lost > norm.threshold) ++norm.failures;
      const double e_mean = std::abs(s.mean - (nd + w)) / (nd + w);
      const double e_var = std::abs(s.variance - 2 * (nd + 0.5) * w) / (2 * (nd + 0.5) * w);
      ++mom.cases;
      mom.worst = std::max({mom.worst, e_mean, e_var});
      if (std::max(e_mean, e_var) > mom.threshold) ++mom.failures;
    }
  }
  norm.passed = norm.failures == 0;
  mom.passed = mom.failures == 0;
  return {norm, mom};
}

/// Charlier transition probabilities against the numerical propagator on a
/// quick configuration (HalfSine L = 3, T = 2, dim 200).
inline Check check_oracle_agreement(std::size_t n_max = 10, std::size_t dim = 200, std::size_t steps = 1000) {
  const auto protocol = DriveProtocol::half_sine(3.0, 2.0);
  const double w = drive_beta(protocol).work;
  Check c{"propagator_oracle_agreement", true, 0, 0, 0.0, 1e-6, ""};
  double defect = 0.0;
  const auto rows = numeric_transition_rows(n_max, protocol, dim, steps, &defect);
  for (const auto& row : rows)
    for (std::size_t m = 0; m <= n_max; ++m) {
      const double e = std::abs(row.probabilities[m] - transition_probability(row.n, m, w));
      ++c.cases;
      c.worst = std::max(c.worst, e);
      if (e > c.threshold) ++c.failures;
    }
  c.passed = c.failures == 0;
  c.note = "max |numeric - Charlier| for n, m <= " + std::to_string(n_max) +
           "; isometry defect " + std::to_string(defect);
  return c;
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(points - 1));
  return g;
}

/// int A(Theta, Phi) dTheta and int A(Theta, Phi) dPhi over the support,
/// both through the cosine substitution Theta = Phi + W + 2 sqrt(Phi W) cos a.
/// The substituted integrand is smooth and even in a, so the midpoint rule
/// converges spectrally and never samples next to the endpoints, where
/// Theta - (sqrt Phi - sqrt W)^2 cancels. Returns the larger deviation from 1.
inline double kernel_stochasticity_defect(double phi_volume, double work, std::size_t nodes = 256) {
  auto midpoint = [nodes](auto&& g) {
    const double h = std::numbers::pi / static_cast<double>(nodes);
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) sum += g(h * (static_cast<double>(k) + 0.5));
    return h * sum;
  };
  const double swing = 2.0 * std::sqrt(phi_volume * work);
  const double over_theta = midpoint([&](double a) {
    const double theta = phi_volume + work + swing * std::cos(a);
    return kernel_density(theta, phi_volume, work) * swing * std::sin(a);
  });
  // For fixed Theta the support in Phi is (sqrt Theta -+ sqrt W)^2.
  const double theta = phi_volume;
  const double swing_phi = 2.0 * std::sqrt(theta * work);
  const double over_phi = midpoint([&](double a) {
    const double phi = theta + work + swing_phi * std::cos(a);
    if (!(phi > 0.0)) return 0.0;
    return kernel_density(theta, phi, work) * swing_phi * std::sin(a);
  });
  return std::max(std::abs(over_theta - 1.0), std::abs(over_phi - 1.0));
}

inline Check check_kernel_stochasticity(std::size_t points = 5) {
  Check c{"classical_kernel_doubly_stochastic", true, 0, 0, 0.0, 1e-8, ""};
  const auto grid = log_grid(0.1, 100.0, points);
  for (double phi : grid)
    for (double w : grid) {
      const double d = kernel_stochasticity_defect(phi, w);
      ++c.cases;
      c.worst = std::max(c.worst, d);
      if (d > c.threshold) ++c.failures;
    }
  c.passed = c.failures == 0;
  return c;
}

/// Phase-average quadrature against the closed forms on a log grid that
/// includes the Phi = W diagonal. Moments are compared relatively, the log
/// mean absolutely.
inline Check check_classical_quadrature(std::size_t points = 5, std::size_t nodes = 512, double tol = 1e-6) {
  Check c{"classical_quadrature_vs_closed_form", true, 0, 0, 0.0, tol, ""};
  const auto grid = log_grid(0.1, 100.0, points);
  for (double phi : grid)
    for (double w : grid) {
      const auto q = classical_microcanonical_quadrature(phi, w, nodes);
      const auto e = classical_microcanonical_stats(phi, w);
      const double err = std::max({std::abs(q.mean - e.mean) / e.mean,
                                   std::abs(q.variance - e.variance) / e.variance,
                                   std::abs(q.log_mean - e.log_mean)});
      ++c.cases;
      c.worst = std::max(c.worst, err);
      if (err > c.threshold) ++c.failures;
    }
  c.passed = c.failures == 0;
  return c;
}

/// W(T) >= 0 and W(T) <= c L^2 for the half-sine drive on a T-grid.
inline Check check_thomson(double amplitude, const std::vector<double>& times) {
  Check c{"thomson_work_bounds", true, 0, 0, 0.0, kWorkBoundConstant * amplitude * amplitude, ""};
  double lowest = std::numeric_limits<double>::infinity();
  for (double t : times) {
    const double w = work_half_sine(amplitude, t);
    ++c.cases;
    lowest = std::min(lowest, w);
    c.worst = std::max(c.worst, w);
    if (w < 0.0 || w > c.threshold) ++c.failures;
  }
  c.passed = c.failures == 0;
  c.note = "min W = " + std::to_string(lowest) + ", bound c L^2 with c = " + std::to_string(kWorkBoundConstant);
  return c;
}

inline VerificationReport run_verification(std::uint64_t seed, std::size_t trials) {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  VerificationReport r;
  r.checks.push_back(check_theorem(seed, trials));
  r.checks.push_back(check_summation_by_parts(seed, trials));
  r.checks.push_back(check_negative_control());
  r.checks.push_back(check_von_neumann_contrast(seed));
  for (auto& c : check_rows_and_moments()) r.checks.push_back(std::move(c));
  r.checks.push_back(check_oracle_agreement());
  r.checks.push_back(check_kernel_stochasticity());
  r.checks.push_back(check_classical_quadrature());
  std::vector<double> times;
  for (int k = 1; k <= 120; ++k) times.push_back(0.25 * k);
  r.checks.push_back(check_thomson(6.0, times));
  return r;
}

}  // namespace qent
