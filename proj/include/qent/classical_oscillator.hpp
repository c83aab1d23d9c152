#pragma once

// Exact classical solution of the driven unit oscillator. With
// m = omega = hbar = 1 the enclosed phase-space volume of an orbit equals its
// energy, so Phi (initial) and Theta (final) are used for both.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "drive.hpp"
#include "error.hpp"
#include "quadrature.hpp"
#include "random.hpp"

namespace qent {

/// Range of final volumes reachable from Phi when work W is done.
struct KernelSupport {
  double lower = 0.0;  // (sqrt(Phi) - sqrt(W))^2
  double upper = 0.0;  // (sqrt(Phi) + sqrt(W))^2

  static KernelSupport of(double phi_volume, double work) {
    const double a = std::sqrt(phi_volume);
    const double b = std::sqrt(work);
    return {(a - b) * (a - b), (a + b) * (a + b)};
  }

  bool contains_strictly(double theta) const noexcept { return theta > lower && theta < upper; }
};

struct MicrocanonicalStats {
  double mean = 0.0;
  double variance = 0.0;
  double log_mean = 0.0;
};

/// Theta = Phi + W + 2 sqrt(Phi W) cos(T - phi - theta), clamped into the
/// kernel support against rounding.
inline double final_volume(double phi_volume, double initial_phase, const WorkDescriptor& w,
                           double duration) {
  if (!(phi_volume >= 0.0)) throw InvalidArgument("initial volume Phi must be non-negative");
  const double theta = phi_volume + w.work +
                       2.0 * std::sqrt(phi_volume * w.work) *
                           std::cos(duration - initial_phase - w.phase);
  const KernelSupport s = KernelSupport::of(phi_volume, w.work);
  return std::clamp(theta, s.lower, s.upper);
}

/// Classical transition density A(Theta, Phi) = 1 / (pi sqrt(4 Phi W - (Theta - Phi - W)^2)).
/// Zero outside the open support; the endpoints (where it diverges
/// integrably) also map to 0.
inline double kernel_density(double theta, double phi_volume, double work) {
  if (!(phi_volume > 0.0) || !(work > 0.0))
    throw InvalidArgument("kernel density is a delta distribution when Phi or W is zero");
  const KernelSupport s = KernelSupport::of(phi_volume, work);
  if (!s.contains_strictly(theta)) return 0.0;
  // 4 Phi W - (Theta - Phi - W)^2 factors as (Theta - lower)(upper - Theta).
  return 1.0 / (std::numbers::pi * std::sqrt((theta - s.lower) * (s.upper - theta)));
}

/// Closed forms: <Theta> = Phi + W, Var = 2 Phi W, <ln Theta> = ln max(Phi, W).
inline MicrocanonicalStats classical_microcanonical_stats(double phi_volume, double work) {
  if (!(phi_volume >= 0.0) || !(work >= 0.0))
    throw InvalidArgument("Phi and W must be non-negative");
  if (phi_volume == 0.0 && work == 0.0)
    throw InvalidArgument("<ln Theta> is undefined for Phi = W = 0");
  return {phi_volume + work, 2.0 * phi_volume * work, std::log(std::max(phi_volume, work))};
}

/// ln max(Phi, W) - ln Phi; exactly zero whenever W <= Phi.
inline double classical_microcanonical_delta_S(double phi_volume, double work) {
  if (!(phi_volume > 0.0) || !(work >= 0.0))
    throw InvalidArgument("Phi must be positive and W non-negative");
  return work > phi_volume ? std::log(work / phi_volume) : 0.0;
}

/// The same three averages computed as normalized phase averages
/// (1/2pi) int_0^2pi g(Theta(phi)) dphi with a fixed tanh-sinh rule of
/// `nodes` points on the half period. Writing psi = pi - phi,
/// Theta = (sqrt Phi - sqrt W)^2 + 4 sqrt(Phi W) sin^2(psi/2), so the only
/// possible singularity (Theta = 0 when Phi = W) sits at the endpoint psi = 0.
/// Throws ConvergenceError when the embedded error estimate exceeds 1e-8.
inline MicrocanonicalStats classical_microcanonical_quadrature(double phi_volume, double work,
                                                              std::size_t nodes) {
  if (nodes < 16) throw InvalidArgument("quadrature needs at least 16 nodes");
  if (!(phi_volume >= 0.0) || !(work >= 0.0))
    throw InvalidArgument("Phi and W must be non-negative");
  if (work == 0.0 || phi_volume == 0.0) {
    const double v = std::max(phi_volume, work);
    if (v == 0.0) throw InvalidArgument("<ln Theta> is undefined for Phi = W = 0");
    return {v, 0.0, std::log(v)};
  }

  const double gap = (std::sqrt(phi_volume) - std::sqrt(work)) * (std::sqrt(phi_volume) - std::sqrt(work));
  const double swing = 4.0 * std::sqrt(phi_volume * work);
  auto theta_of = [&](double psi) {
    const double s = std::sin(psi / 2);
    return gap + swing * s * s;
  };
  constexpr double kTarget = 1e-8;
  auto average = [&](auto&& g, const char* what) {
    const quad::Estimate e = quad::tanh_sinh_fixed(g, 0.0, std::numbers::pi, nodes);
    const double value = e.value / std::numbers::pi;
    const double err = e.error / std::numbers::pi;
    if (err > kTarget * std::max(1.0, std::abs(value)))
      throw ConvergenceError(std::string("phase average of ") + what + " did not converge", err);
    return value;
  };

  MicrocanonicalStats out;
  out.mean = average(theta_of, "Theta");
  const double mean = out.mean;
  out.variance = average([&](double psi) { const double d = theta_of(psi) - mean; return d * d; },
                         "(Theta - <Theta>)^2");
  out.log_mean = average(
      [&](double psi) {
        // Split off ln sin^2 when the orbit can reach Theta = 0.
        if (gap == 0.0) return std::log(swing) + 2.0 * std::log(std::sin(psi / 2));
        return std::log(theta_of(psi));
      },
      "ln Theta");
  return out;
}

/// Classical canonical entropy change for initial density beta e^{-beta Phi}:
/// -beta W int_0^1 e^{-beta W x} ln x dx, evaluated with adaptive tanh-sinh
/// (the ln x endpoint is never sampled).
inline double classical_canonical_delta_S(double beta_temp, double work) {
  if (!(beta_temp > 0.0)) throw InvalidArgument("inverse temperature must be positive");
  if (!(work >= 0.0)) throw InvalidArgument("work must be non-negative");
  if (work == 0.0) return 0.0;
  const double a = beta_temp * work;
  const quad::Estimate e =
      quad::tanh_sinh([a](double x) { return std::exp(-a * x) * std::log(x); }, 0.0, 1.0, 1e-14, 1e-300, 12);
  return -a * e.value;
}

/// Monte Carlo draw of final volumes: phi uniform on [0, 2 pi) mapped through
/// final_volume. Deterministic per seed.
inline std::vector<double> sample_final_volumes(double phi_volume, const WorkDescriptor& w,
                                                double duration, std::size_t count,
                                                std::uint64_t seed) {
  if (count == 0) throw InvalidArgument("sample count must be positive");
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<double> out(count);
  for (double& v : out) v = final_volume(phi_volume, phase(rng), w, duration);
  return out;
}

}  // namespace qent
