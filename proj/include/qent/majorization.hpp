#pragma once

// Diagonal entropy ln(N + 1/2) of a population vector over energy levels and
// its change under doubly stochastic (unitary-induced) transitions.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "error.hpp"
#include "random.hpp"

namespace qent {

inline constexpr double kNormalizationTolerance = 1e-12;

/// Populations p_0..p_K of the energy eigenstates. Immutable once built.
class ProbabilityVector {
 public:
  /// Validates and renormalizes `weights`. Rejects negative entries and any
  /// total that drifts from 1 by more than `tolerance`.
  static ProbabilityVector from_weights(std::vector<double> weights,
                                        double tolerance = kNormalizationTolerance) {
    if (weights.empty()) throw InvalidArgument("probability vector must not be empty");
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w))
        throw InvalidArgument("probability weights must be finite and non-negative");
      total += w;
    }
    if (std::abs(total - 1.0) > tolerance)
      throw InvalidArgument("probability weights sum to " + std::to_string(total) +
                            ", outside tolerance of 1");
    for (double& w : weights) w /= total;
    return ProbabilityVector(std::move(weights));
  }

  /// Scales arbitrary non-negative weights to unit mass.
  static ProbabilityVector normalized(std::vector<double> weights) {
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) throw InvalidArgument("weights have no mass");
    for (double& w : weights) w /= total;
    return from_weights(std::move(weights));
  }

  /// All mass on level `level` of a (dim)-level system.
  static ProbabilityVector delta(std::size_t dim, std::size_t level) {
    if (level >= dim) throw InvalidArgument("delta level outside dimension");
    std::vector<double> w(dim, 0.0);
    w[level] = 1.0;
    return ProbabilityVector(std::move(w));
  }

  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }

  /// p_m >= p_n for every m < n (exact comparison, ties allowed).
  bool is_decreasing() const noexcept { return is_decreasing_; }

  friend bool operator==(const ProbabilityVector&, const ProbabilityVector&) = default;

 private:
  explicit ProbabilityVector(std::vector<double> weights)
      : weights_(std::move(weights)),
        is_decreasing_(std::is_sorted(weights_.begin(), weights_.end(), std::greater<>{})) {}

  std::vector<double> weights_;
  bool is_decreasing_;
};

/// Matrix of transition probabilities |a_kn|^2, row k = initial level,
/// column n = final level. Only obtainable through check_doubly_stochastic.
class TransitionMatrix {
 public:
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  double tolerance() const noexcept { return tolerance_; }
  double operator()(std::size_t k, std::size_t n) const {
    return entries_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
  }

 private:
  TransitionMatrix(Eigen::MatrixXd entries, double tolerance)
      : entries_(std::move(entries)), tolerance_(tolerance) {}

  friend TransitionMatrix check_doubly_stochastic(Eigen::MatrixXd, double);

  Eigen::MatrixXd entries_;
  double tolerance_;
};

struct EntropyReport {
  double s_initial = 0.0;
  double s_final = 0.0;
  double delta_direct = 0.0;    // sum_n (p'_n - p_n) ln(n + 1/2)
  double delta_by_parts = 0.0;  // sum_m ln((m + 3/2)/(m + 1/2)) sum_{n<=m} (p_n - p'_n)
  double min_cumulative_gap = 0.0;
  std::vector<double> cumulative_gaps;  // sum_{n<=m} (p_n - p'_n) for every m
};

/// Accepts `m` as a TransitionMatrix iff it is square, entry-wise
/// non-negative, and every row and column sums to 1 within `tol`.
/// Throws NotDoublyStochastic naming the worst offending line otherwise.
inline TransitionMatrix check_doubly_stochastic(Eigen::MatrixXd m, double tol) {
  if (m.rows() != m.cols())
    throw DimensionMismatch(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  if (m.rows() == 0) throw InvalidArgument("empty transition matrix");
  if (!(tol >= 0.0)) throw InvalidArgument("tolerance must be non-negative");

  for (Eigen::Index k = 0; k < m.rows(); ++k)
    for (Eigen::Index n = 0; n < m.cols(); ++n)
      if (!(m(k, n) >= 0.0))
        throw NotDoublyStochastic(NotDoublyStochastic::Line::Entry,
                                  static_cast<std::size_t>(k), m(k, n));

  const Eigen::VectorXd rows = m.rowwise().sum();
  const Eigen::VectorXd cols = m.colwise().sum().transpose();
  Eigen::Index worst_row = 0;
  Eigen::Index worst_col = 0;
  const double row_dev = (rows.array() - 1.0).abs().maxCoeff(&worst_row);
  const double col_dev = (cols.array() - 1.0).abs().maxCoeff(&worst_col);
  if (row_dev > tol || col_dev > tol) {
    if (row_dev >= col_dev)
      throw NotDoublyStochastic(NotDoublyStochastic::Line::Row,
                                static_cast<std::size_t>(worst_row), rows(worst_row) - 1.0);
    throw NotDoublyStochastic(NotDoublyStochastic::Line::Column,
                              static_cast<std::size_t>(worst_col), cols(worst_col) - 1.0);
  }
  return TransitionMatrix(std::move(m), tol);
}

/// Expectation of ln(N + 1/2), in nats.
inline double diagonal_entropy(const ProbabilityVector& p) {
  double s = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) s += p[n] * std::log(static_cast<double>(n) + 0.5);
  return s;
}

/// -sum p ln p with 0 ln 0 = 0. The spectrum of rho is invariant under
/// unitary evolution, so evaluated on the initial populations this is the
/// von Neumann entropy at every later time.
inline double von_neumann_entropy(const ProbabilityVector& p) {
  double s = 0.0;
  for (double w : p.weights())
    if (w > 0.0) s -= w * std::log(w);
  return s;
}

/// p'_n = sum_k p_k D[k][n]. The ordering flag of the result is recomputed.
inline ProbabilityVector evolve_distribution(const ProbabilityVector& p, const TransitionMatrix& d) {
  if (p.size() != d.dim()) throw DimensionMismatch(d.dim(), p.size());
  const auto w = p.weights();
  const Eigen::Map<const Eigen::VectorXd> pv(w.data(), static_cast<Eigen::Index>(w.size()));
  const Eigen::VectorXd evolved = d.entries().transpose() * pv;
  std::vector<double> out(evolved.data(), evolved.data() + evolved.size());
  // Row sums are 1 within d.tolerance(), so the mass drifts by at most that.
  return ProbabilityVector::from_weights(std::move(out), d.tolerance() + kNormalizationTolerance);
}

inline EntropyReport entropy_change(const ProbabilityVector& p, const ProbabilityVector& p_final) {
  if (p.size() != p_final.size()) throw DimensionMismatch(p.size(), p_final.size());
  EntropyReport r;
  r.s_initial = diagonal_entropy(p);
  r.s_final = diagonal_entropy(p_final);
  r.cumulative_gaps.resize(p.size());

  double direct = 0.0;
  double by_parts = 0.0;
  double gap = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < p.size(); ++m) {
    const double level = static_cast<double>(m) + 0.5;
    direct += (p_final[m] - p[m]) * std::log(level);
    gap += p[m] - p_final[m];
    r.cumulative_gaps[m] = gap;
    min_gap = std::min(min_gap, gap);
    by_parts += std::log1p(1.0 / level) * gap;
  }
  r.delta_direct = direct;
  r.delta_by_parts = by_parts;
  r.min_cumulative_gap = min_gap;
  return r;
}

/// Squared entries of an orthogonal matrix obtained by QR of a standard
/// normal matrix. Not exactly Haar distributed; adequate as a property-test
/// generator of doubly stochastic matrices. Deterministic in (dim, seed).
inline TransitionMatrix random_unistochastic(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw InvalidArgument("dimension must be positive");
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal;
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
  const Eigen::MatrixXd q = g.householderQr().householderQ();
  return check_doubly_stochastic(q.cwiseAbs2(), 1e-10);
}

/// Sorted-descending Dirichlet(1,...,1) sample.
inline ProbabilityVector random_decreasing_distribution(std::size_t dim, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(dim);
  for (double& x : w) x = expo(rng);
  std::sort(w.begin(), w.end(), std::greater<>{});
  return ProbabilityVector::normalized(std::move(w));
}

/// Unordered Dirichlet(1,...,1) sample.
inline ProbabilityVector random_distribution(std::size_t dim, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(dim);
  for (double& x : w) x = expo(rng);
  return ProbabilityVector::normalized(std::move(w));
}

}  // namespace qent
