#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <qent/quantum_oscillator.hpp>
#include <qent/schrodinger.hpp>

#include "oracles.hpp"

using namespace qent;

TEST(Hamiltonian, Entries) {
  const auto h = hamiltonian_matrix(1.0, DriveProtocol::half_sine(2.0, 2.0), 4);
  EXPECT_DOUBLE_EQ(h(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(h(3, 3), 3.5);
  EXPECT_DOUBLE_EQ(h(0, 1), 2.0 * std::sqrt(0.5));
  EXPECT_DOUBLE_EQ(h(2, 1), 2.0 * std::sqrt(1.0));
  EXPECT_DOUBLE_EQ(h(0, 2), 0.0);
  EXPECT_THROW(hamiltonian_tridiagonal(1.0, 1), InvalidArgument);
}

TEST(Propagator, ZeroForceIsDiagonalPhase) {
  const auto r = propagate(DriveProtocol::half_sine(0.0, 2.0), 20, 100);
  for (Eigen::Index k = 0; k < 20; ++k) {
    const auto want = std::polar(1.0, -(k + 0.5) * 2.0);
    EXPECT_NEAR(std::abs(r.matrix(k, k) - want), 0.0, 1e-12);
  }
  EXPECT_LT(r.unitarity_defect, 1e-12);
}

TEST(Propagator, UnitaryForModerateDrive) {
  const auto r = propagate(DriveProtocol::half_sine(1.0, 2.0), 120, 4000);
  EXPECT_LT(r.unitarity_defect, 1e-10);
  EXPECT_EQ(r.dim, 120u);
  EXPECT_EQ(r.steps, 4000u);
}

TEST(Propagator, GroundRowIsPoisson) {
  const auto protocol = DriveProtocol::half_sine(6.0, 2.0);
  const double w = work_half_sine(6.0, 2.0);
  const auto row = numeric_transition_row(0, protocol, 200, 2000);
  EXPECT_FALSE(row.truncation_warning);
  for (std::size_t m = 0; m < 100; ++m) EXPECT_NEAR(row.probabilities[m], oracle::poisson_pmf(m, w), 1e-6);
}

TEST(Propagator, SecondOrderInTimeStep) {
  const auto protocol = DriveProtocol::half_sine(3.0, 2.0);
  const double w = work_half_sine(3.0, 2.0);
  auto error = [&](std::size_t steps) {
    const auto rows = numeric_transition_rows(5, protocol, 120, steps);
    double e = 0.0;
    for (const auto& row : rows)
      for (std::size_t m = 0; m <= 20; ++m)
        e = std::max(e, std::abs(row.probabilities[m] - transition_probability(row.n, m, w)));
    return e;
  };
  const double coarse = error(200);
  const double fine = error(400);
  EXPECT_NEAR(std::log2(coarse / fine), 2.0, 0.2);
}

TEST(Propagator, InsensitiveToBasisSize) {
  const auto protocol = DriveProtocol::half_sine(6.0, 2.0);
  const auto small = numeric_transition_rows(10, protocol, 200, 1000);
  const auto large = numeric_transition_rows(10, protocol, 300, 1000);
  for (std::size_t n = 0; n <= 10; ++n)
    for (std::size_t m = 0; m <= 60; ++m)
      EXPECT_NEAR(small[n].probabilities[m], large[n].probabilities[m], 1e-10);
}

TEST(Propagator, LeakWarningForSmallBasis) {
  const auto row = numeric_transition_row(0, DriveProtocol::half_sine(6.0, 2.0), 40, 1000);
  EXPECT_TRUE(row.truncation_warning);
  EXPECT_GT(row.leaked_mass, 1e-8);
}

TEST(Propagator, ArgumentChecks) {
  const auto protocol = DriveProtocol::half_sine(1.0, 2.0);
  EXPECT_THROW(numeric_transition_row(10, protocol, 20, 1000), InvalidArgument);
  EXPECT_THROW(numeric_transition_row(0, protocol, 20, 50), InvalidArgument);
  EXPECT_THROW(numeric_transition_rows(10, protocol, 20, 1000), InvalidArgument);
}

TEST(Propagator, TabulatedDriveAgreesWithHalfSine) {
  const double t = 2.0;
  const auto tab = DriveProtocol::tabulate([&](double s) { return 3.0 * std::sin(std::numbers::pi * s / t); }, t, 20001);
  const auto a = numeric_transition_rows(3, tab, 100, 1000);
  const auto b = numeric_transition_rows(3, DriveProtocol::half_sine(3.0, t), 100, 1000);
  for (std::size_t n = 0; n <= 3; ++n)
    for (std::size_t m = 0; m < 40; ++m) EXPECT_NEAR(a[n].probabilities[m], b[n].probabilities[m], 1e-7);
}
