#pragma once

// Data behind the three oscillator figures: microcanonical entropy versus the
// initial level, and microcanonical / canonical entropy change versus the
// switching time of the half-sine drive.

#include <cmath>
#include <cstddef>
#include <vector>

#include "classical_oscillator.hpp"
#include "drive.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "quantum_oscillator.hpp"

namespace qent {

/// t_min, t_min + t_step, ... up to t_max inclusive.
struct TimeGrid {
  double t_min = 0.25;
  double t_max = 30.0;
  double t_step = 0.25;

  void validate() const {
    if (!(t_min > 0.0)) throw InvalidArgument("t-min must be positive (T = 0 is excluded)");
    if (!(t_step > 0.0)) throw InvalidArgument("t-step must be positive");
    if (!(t_max >= t_min)) throw InvalidArgument("t-max must not be below t-min");
  }

  std::vector<double> points() const {
    validate();
    const auto count = static_cast<std::size_t>(std::floor((t_max - t_min) / t_step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = t_min + t_step * static_cast<double>(k);
    return out;
  }
};

struct Fig1Row {
  std::size_t n = 0;
  double classical = 0.0;  // ln max(n + 1/2, W)
  double quantum = 0.0;    // <ln(m + 1/2)>_n
  double captured_mass = 0.0;
};

inline std::vector<Fig1Row> figure1(double work, std::size_t n_max, const TruncationPolicy& policy) {
  if (!(work > 0.0)) throw InvalidArgument("work must be positive");
  policy.validate();
  return parallel_map(n_max + 1, [&](std::size_t n) {
    const double level = static_cast<double>(n) + 0.5;
    const auto q = quantum_microcanonical_stats(n, work, policy);
    return Fig1Row{n, classical_microcanonical_stats(level, work).log_mean, q.entropy, q.captured_mass};
  });
}

struct Fig2Row {
  double duration = 0.0;
  double work = 0.0;
  double classical = 0.0;  // ln max(Phi, W) - ln Phi with Phi = n + 1/2
  double quantum = 0.0;    // <ln(m + 1/2)>_n - ln(n + 1/2)
};

inline std::vector<Fig2Row> figure2(double amplitude, std::size_t level, const std::vector<double>& times,
                                    const TruncationPolicy& policy) {
  policy.validate();
  const double phi = static_cast<double>(level) + 0.5;
  return parallel_map(times.size(), [&](std::size_t i) {
    const double t = times[i];
    const double w = work_half_sine(amplitude, t);
    return Fig2Row{t, w, classical_microcanonical_delta_S(phi, w),
                   quantum_microcanonical_stats(level, w, policy).entropy_gain};
  });
}

struct Fig3Row {
  double duration = 0.0;
  double work = 0.0;
  double classical = 0.0;  // canonical, continuous Phi
  double quantum = 0.0;    // canonical, levels n <= n_trunc
  double quantum_tail_bound = 0.0;
};

inline std::vector<Fig3Row> figure3(double amplitude, double beta_temp, std::size_t n_trunc,
                                    const std::vector<double>& times, const TruncationPolicy& policy) {
  policy.validate();
  return parallel_map(times.size(), [&](std::size_t i) {
    const double t = times[i];
    const double w = work_half_sine(amplitude, t);
    const CanonicalDeltaS q = quantum_canonical_delta_S(beta_temp, w, n_trunc, policy);
    return Fig3Row{t, w, classical_canonical_delta_S(beta_temp, w), q.delta_S, q.tail_bound};
  });
}

}  // namespace qent
