#pragma once

// External force f(t) applied to the unit oscillator (m = omega = hbar = 1)
// and the complex amplitude beta(T) = int_0^T f(t) e^{it} dt it transfers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <variant>
#include <vector>

#include "error.hpp"
#include "quadrature.hpp"

namespace qent {

/// f(t) = amplitude * sin(pi t / duration) on [0, duration], 0 elsewhere.
struct HalfSine {
  double amplitude = 0.0;
  double duration = 1.0;
};

/// f sampled on the uniform grid t_j = j * duration / (samples.size() - 1).
struct Tabulated {
  std::vector<double> samples;
  double duration = 1.0;
};

class DriveProtocol {
 public:
  using Shape = std::variant<HalfSine, Tabulated>;

  static DriveProtocol half_sine(double amplitude, double duration) {
    return DriveProtocol(HalfSine{amplitude, duration});
  }

  static DriveProtocol tabulated(std::vector<double> samples, double duration) {
    if (samples.size() < 2) throw InvalidArgument("tabulated drive needs at least two samples");
    return DriveProtocol(Tabulated{std::move(samples), duration});
  }

  /// Samples `f` on `points` uniformly spaced times covering [0, duration].
  template <class F>
  static DriveProtocol tabulate(F&& f, double duration, std::size_t points) {
    if (points < 2) throw InvalidArgument("tabulated drive needs at least two samples");
    std::vector<double> s(points);
    const double step = duration / static_cast<double>(points - 1);
    for (std::size_t j = 0; j < points; ++j) s[j] = f(step * static_cast<double>(j));
    return tabulated(std::move(s), duration);
  }

  const Shape& shape() const noexcept { return shape_; }

  double duration() const noexcept {
    return std::visit([](const auto& s) { return s.duration; }, shape_);
  }

  /// Force at time t. Tabulated shapes interpolate linearly.
  double force(double t) const {
    if (t < 0.0 || t > duration()) return 0.0;
    if (const auto* hs = std::get_if<HalfSine>(&shape_))
      return hs->amplitude * std::sin(std::numbers::pi * t / hs->duration);
    const auto& tab = std::get<Tabulated>(shape_);
    const double step = tab.duration / static_cast<double>(tab.samples.size() - 1);
    const double pos = t / step;
    const auto j = std::min(static_cast<std::size_t>(pos), tab.samples.size() - 2);
    const double frac = pos - static_cast<double>(j);
    return tab.samples[j] + frac * (tab.samples[j + 1] - tab.samples[j]);
  }

 private:
  explicit DriveProtocol(Shape shape) : shape_(std::move(shape)) {
    if (!(duration() > 0.0) || !std::isfinite(duration()))
      throw InvalidArgument("drive duration T must be positive");
  }

  Shape shape_;
};

/// beta(T), the work W = |beta|^2 / 2 it implies, and theta = arg beta.
struct WorkDescriptor {
  std::complex<double> beta;
  double work = 0.0;
  double phase = 0.0;

  static WorkDescriptor from_beta(std::complex<double> b) {
    return {b, std::norm(b) / 2.0, std::arg(b)};
  }
};

/// Half-width of the window around T = pi where the half-sine formulas switch
/// to their Taylor expansion. The direct quotient loses about six digits
/// inside it.
inline constexpr double kSeriesWindow = 1e-3;

/// sup_T W(T) / L^2 for the half-sine drive, i.e. the supremum of
/// pi^2 T^2 (1 + cos T) / (pi^2 - T^2)^2. Attained near T = 4.2953; see
/// work_bound_constant_scan() for the derivation. Rounded up in the last
/// digits so it stays an upper bound.
inline constexpr double kWorkBoundConstant = 1.4714850658148;

namespace detail {

// beta for the half-sine in closed form: L pi T (1 + e^{iT}) / (pi^2 - T^2).
inline std::complex<double> half_sine_beta_direct(double amplitude, double duration) {
  using std::numbers::pi;
  const double t = duration;
  return amplitude * pi * t * (1.0 + std::polar(1.0, t)) / (pi * pi - t * t);
}

// Same quantity about T = pi: with d = T - pi,
// beta = L pi T (e^{id} - 1) / (d (2 pi + d)), and (e^{id} - 1)/d is expanded
// to fourth order.
inline std::complex<double> half_sine_beta_series(double amplitude, double duration) {
  using std::numbers::pi;
  const double d = duration - pi;
  const std::complex<double> id(0.0, d);
  // i * (1 + id/2 + (id)^2/6 + (id)^3/24 + (id)^4/120)
  const std::complex<double> expm1_over_d =
      std::complex<double>(0.0, 1.0) *
      (1.0 + id * (1.0 / 2 + id * (1.0 / 6 + id * (1.0 / 24 + id * (1.0 / 120)))));
  return amplitude * pi * duration * expm1_over_d / (2 * pi + d);
}

}  // namespace detail

/// W(T) = L^2 pi^2 T^2 (1 + cos T) / (pi^2 - T^2)^2 evaluated literally.
/// Loses accuracy close to T = pi; use work_half_sine.
inline double work_half_sine_direct(double amplitude, double duration) {
  using std::numbers::pi;
  const double t = duration;
  const double denom = pi * pi - t * t;
  return amplitude * amplitude * pi * pi * t * t * (1.0 + std::cos(t)) / (denom * denom);
}

/// Work done by the half-sine drive, with the removable singularity at
/// T = pi handled by a series branch (W(pi) = L^2 pi^2 / 8).
inline double work_half_sine(double amplitude, double duration) {
  if (!(duration > 0.0)) throw InvalidArgument("switching time T must be positive");
  if (std::abs(duration - std::numbers::pi) < kSeriesWindow)
    return std::norm(detail::half_sine_beta_series(amplitude, duration)) / 2.0;
  return work_half_sine_direct(amplitude, duration);
}

inline WorkDescriptor drive_beta(const DriveProtocol& protocol) {
  if (const auto* hs = std::get_if<HalfSine>(&protocol.shape())) {
    if (hs->amplitude == 0.0) return WorkDescriptor::from_beta({0.0, 0.0});
    const bool near_pole = std::abs(hs->duration - std::numbers::pi) < kSeriesWindow;
    return WorkDescriptor::from_beta(
        near_pole ? detail::half_sine_beta_series(hs->amplitude, hs->duration)
                  : detail::half_sine_beta_direct(hs->amplitude, hs->duration));
  }
  const auto& tab = std::get<Tabulated>(protocol.shape());
  const double step = tab.duration / static_cast<double>(tab.samples.size() - 1);
  std::vector<std::complex<double>> integrand(tab.samples.size());
  for (std::size_t j = 0; j < integrand.size(); ++j)
    integrand[j] = tab.samples[j] * std::polar(1.0, step * static_cast<double>(j));
  return WorkDescriptor::from_beta(
      quad::composite_simpson<std::complex<double>>(integrand, step));
}

/// Re-derives kWorkBoundConstant: dense scan of W(T)/L^2 over (0, t_max],
/// then golden-section refinement around the best sample.
inline double work_bound_constant_scan(double t_max = 60.0, std::size_t samples = 600000) {
  auto g = [](double t) { return work_half_sine(1.0, t); };
  double best_t = 0.0;
  double best = 0.0;
  for (std::size_t i = 1; i <= samples; ++i) {
    const double t = t_max * static_cast<double>(i) / static_cast<double>(samples);
    if (const double v = g(t); v > best) {
      best = v;
      best_t = t;
    }
  }
  const double h = t_max / static_cast<double>(samples);
  double lo = best_t - h;
  double hi = best_t + h;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double a = hi - ratio * (hi - lo);
    const double b = lo + ratio * (hi - lo);
    if (g(a) > g(b))
      hi = b;
    else
      lo = a;
  }
  return std::max(best, g((lo + hi) / 2));
}

}  // namespace qent
