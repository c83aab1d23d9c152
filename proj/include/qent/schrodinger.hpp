#pragma once

// Numerical propagator for H(t) = (p^2 + x^2)/2 + f(t) x in the truncated
// number basis |0>..|dim-1>. Each time slice applies exp(-i H(t_mid) dt),
// which is unitary to the accuracy of the exponential itself.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "drive.hpp"
#include "error.hpp"

namespace qent {

/// Symmetric tridiagonal matrix: diagonal d_0..d_{n-1}, off-diagonal
/// e_0..e_{n-2} with e_i = H(i, i+1).
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const noexcept { return diag.size(); }

  Eigen::MatrixXd dense() const {
    const auto n = static_cast<Eigen::Index>(diag.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) h(i, i) = diag[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < n; ++i)
      h(i, i + 1) = h(i + 1, i) = off[static_cast<std::size_t>(i)];
    return h;
  }
};

inline Tridiagonal hamiltonian_tridiagonal(double force, std::size_t dim) {
  if (dim < 2) throw InvalidArgument("basis dimension must be at least 2");
  Tridiagonal h;
  h.diag.resize(dim);
  h.off.resize(dim - 1);
  for (std::size_t n = 0; n < dim; ++n) h.diag[n] = static_cast<double>(n) + 0.5;
  // <n|x|n+1> = sqrt((n+1)/2)
  for (std::size_t n = 0; n + 1 < dim; ++n) h.off[n] = force * std::sqrt((static_cast<double>(n) + 1.0) / 2.0);
  return h;
}

/// H(t) in the number basis: diag(n + 1/2) plus f(t) x.
inline Eigen::MatrixXd hamiltonian_matrix(double t, const DriveProtocol& protocol, std::size_t dim) {
  return hamiltonian_tridiagonal(protocol.force(t), dim).dense();
}

struct PropagatorResult {
  Eigen::MatrixXcd matrix;  // U(T, 0); column k is the evolved |k>
  double unitarity_defect = 0.0;  // max |U^dagger U - 1|
  std::size_t dim = 0;
  std::size_t steps = 0;
};

inline constexpr double kUnitarityThreshold = 1e-9;

namespace detail {

// out = exp(-i h dt) * state, columnwise, by Taylor series on the
// spectrum-centred matrix. dt is split further whenever |h| dt > 1/2.
inline void apply_exponential(const Tridiagonal& h, double dt, Eigen::MatrixXcd& state,
                              Eigen::MatrixXcd& term, Eigen::MatrixXcd& scratch) {
  const std::size_t n = h.size();
  double lo = h.diag[0];
  double hi = h.diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(h.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(h.off[i]) : 0.0);
    lo = std::min(lo, h.diag[i] - r);
    hi = std::max(hi, h.diag[i] + r);
  }
  const double shift = (lo + hi) / 2;
  const double norm_bound = (hi - lo) / 2;
  const int splits = std::max(1, static_cast<int>(std::ceil(norm_bound * dt / 0.5)));
  const double sub = dt / splits;
  const double rho = norm_bound * sub;
  int terms = 1;
  for (double bound = rho; bound > 1e-17 && terms < 60; ++terms) bound *= rho / (terms + 1);

  const std::complex<double> phase = std::polar(1.0, -shift * sub);
  const Eigen::Index cols = state.cols();
  const auto rows = static_cast<Eigen::Index>(n);
  for (int s = 0; s < splits; ++s) {
    term = state;
    for (int k = 1; k <= terms; ++k) {
      const double c = sub / k;
      for (Eigen::Index j = 0; j < cols; ++j) {
        const std::complex<double>* x = term.col(j).data();
        std::complex<double>* y = scratch.col(j).data();
        for (Eigen::Index i = 0; i < rows; ++i) {
          const auto iu = static_cast<std::size_t>(i);
          std::complex<double> v = (h.diag[iu] - shift) * x[i];
          if (i > 0) v += h.off[iu - 1] * x[i - 1];
          if (i + 1 < rows) v += h.off[iu] * x[i + 1];
          // multiply by -i c
          y[i] = std::complex<double>(c * v.imag(), -c * v.real());
        }
      }
      term.swap(scratch);
      state += term;
    }
    state *= phase;
  }
}

inline double isometry_defect(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd g = u.adjoint() * u;
  return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

// Evolves the basis vectors |first>..|first + count - 1> over [0, T].
inline Eigen::MatrixXcd propagate_columns(const DriveProtocol& protocol, std::size_t dim,
                                          std::size_t steps, std::size_t first, std::size_t count) {
  if (dim < 2) throw InvalidArgument("basis dimension must be at least 2");
  if (steps < 100) throw InvalidArgument("propagation needs at least 100 time steps");
  if (first + count > dim) throw InvalidArgument("requested columns exceed the basis");
  const auto d = static_cast<Eigen::Index>(dim);
  const auto c = static_cast<Eigen::Index>(count);
  Eigen::MatrixXcd state = Eigen::MatrixXcd::Zero(d, c);
  for (Eigen::Index j = 0; j < c; ++j) state(static_cast<Eigen::Index>(first) + j, j) = 1.0;
  Eigen::MatrixXcd term(d, c);
  Eigen::MatrixXcd scratch(d, c);
  const double dt = protocol.duration() / static_cast<double>(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    const double mid = (static_cast<double>(s) + 0.5) * dt;
    apply_exponential(hamiltonian_tridiagonal(protocol.force(mid), dim), dt, state, term, scratch);
  }
  return state;
}

}  // namespace detail

/// Time-ordered product of midpoint exponentials over `steps` slices of
/// [0, T]. Throws UnitarityError when the product drifts from unitarity by
/// more than kUnitarityThreshold.
inline PropagatorResult propagate(const DriveProtocol& protocol, std::size_t dim, std::size_t steps) {
  PropagatorResult r;
  r.matrix = detail::propagate_columns(protocol, dim, steps, 0, dim);
  r.unitarity_defect = detail::isometry_defect(r.matrix);
  r.dim = dim;
  r.steps = steps;
  if (r.unitarity_defect > kUnitarityThreshold)
    throw UnitarityError("propagator unitarity defect " + std::to_string(r.unitarity_defect) +
                             " exceeds threshold; raise the number of steps",
                         r.unitarity_defect);
  return r;
}

struct NumericRow {
  std::size_t n = 0;
  std::vector<double> probabilities;  // index m = 0..dim-1
  double leaked_mass = 0.0;           // mass in m >= 3 dim / 4
  bool truncation_warning = false;    // leaked_mass > 1e-8
};

inline NumericRow row_from_column(std::size_t n, const Eigen::Ref<const Eigen::VectorXcd>& column) {
  NumericRow row;
  row.n = n;
  const auto dim = static_cast<std::size_t>(column.size());
  row.probabilities.resize(dim);
  for (std::size_t m = 0; m < dim; ++m) {
    row.probabilities[m] = std::norm(column(static_cast<Eigen::Index>(m)));
    if (4 * m >= 3 * dim) row.leaked_mass += row.probabilities[m];
  }
  row.truncation_warning = row.leaked_mass > 1e-8;
  return row;
}

/// |<m| U |n>|^2 over m. The half-sine drive is cyclic, so the final energy
/// basis is the initial number basis.
inline NumericRow numeric_transition_row(std::size_t n, const DriveProtocol& protocol, std::size_t dim,
                                         std::size_t steps) {
  if (2 * n >= dim) throw InvalidArgument("initial level must satisfy n < dim / 2");
  const Eigen::MatrixXcd col = detail::propagate_columns(protocol, dim, steps, n, 1);
  const double defect = std::abs(col.col(0).squaredNorm() - 1.0);
  if (defect > kUnitarityThreshold)
    throw UnitarityError("evolved state lost normalization; raise the number of steps", defect);
  return row_from_column(n, col.col(0));
}

/// Rows n = 0..n_max from a single propagation of those columns. The
/// isometry defect of the propagated block is returned through `defect`.
inline std::vector<NumericRow> numeric_transition_rows(std::size_t n_max, const DriveProtocol& protocol,
                                                       std::size_t dim, std::size_t steps,
                                                       double* defect = nullptr) {
  if (2 * n_max >= dim) throw InvalidArgument("initial levels must satisfy n < dim / 2");
  const Eigen::MatrixXcd cols = detail::propagate_columns(protocol, dim, steps, 0, n_max + 1);
  const double d = detail::isometry_defect(cols);
  if (defect) *defect = d;
  if (d > kUnitarityThreshold)
    throw UnitarityError("propagated block is not an isometry; raise the number of steps", d);
  std::vector<NumericRow> rows;
  rows.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) rows.push_back(row_from_column(n, cols.col(static_cast<Eigen::Index>(n))));
  return rows;
}

}  // namespace qent
