#include "bitreset/coherence.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

namespace {

using bitreset::Complex;
using bitreset::DensityMatrix2;
using bitreset::Hamiltonian2;
using bitreset::Matrix2c;

constexpr double kTol = 1e-12;

Hamiltonian2 random_hamiltonian(std::mt19937_64 &gen) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return Hamiltonian2(u(gen), u(gen), Complex(u(gen), u(gen)));
}

TEST(Hamiltonian, EigenvectorsArePhaseFixedAndOrthonormal) {
  std::mt19937_64 gen(8);
  for (int i = 0; i < 200; ++i) {
    const Hamiltonian2 h = random_hamiltonian(gen);
    const auto &e = h.eigen();
    EXPECT_LE(e.energies[0], e.energies[1]);
    for (const auto &v : e.vectors) {
      EXPECT_NEAR(v.norm(), 1.0, kTol);
      const int lead = std::abs(v(0)) > kTol ? 0 : 1;
      EXPECT_NEAR(v(lead).imag(), 0.0, kTol);
      EXPECT_GT(v(lead).real(), 0.0);
    }
    EXPECT_NEAR(std::abs(e.vectors[0].dot(e.vectors[1])), 0.0, 1e-12);
    for (int k = 0; k < 2; ++k) {
      const auto residual = (h.matrix() * e.vectors[k] - e.energies[k] * e.vectors[k]).norm();
      EXPECT_LT(residual, 1e-12);
    }
  }
}

TEST(Hamiltonian, RotatedHasExpectedEigenbasis) {
  const double theta = 0.3;
  const Hamiltonian2 h = Hamiltonian2::rotated(0.0, 2.0, theta);
  EXPECT_NEAR(h.eigen().energies[0], 0.0, kTol);
  EXPECT_NEAR(h.eigen().energies[1], 2.0, kTol);
  EXPECT_NEAR(h.eigen().vectors[0](0).real(), std::cos(theta), kTol);
  EXPECT_NEAR(h.eigen().vectors[0](1).real(), std::sin(theta), kTol);
}

TEST(Hamiltonian, FromMatrixRejectsNonHermitian) {
  Matrix2c m;
  m << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 2.0;
  EXPECT_THROW(Hamiltonian2::from_matrix(m), std::invalid_argument);
}

TEST(DensityMatrix, Validation) {
  EXPECT_THROW(DensityMatrix2::diagonal(0.7, 0.7), std::invalid_argument);
  EXPECT_THROW(DensityMatrix2::diagonal(1.2, -0.2), std::invalid_argument);
  Matrix2c m;
  m << 0.5, 0.6, 0.6, 0.5;  // eigenvalue -0.1
  EXPECT_THROW(DensityMatrix2{m}, std::invalid_argument);
}

TEST(Unitary, RejectsNonUnitary) {
  Matrix2c m = Matrix2c::Identity();
  m(0, 1) = 0.1;
  EXPECT_THROW(bitreset::Unitary2{m}, std::invalid_argument);
}

TEST(DiagonalPath, DiagonalStateIsUntouched) {
  const DensityMatrix2 rho = DensityMatrix2::diagonal(0.8, 0.2);
  const DensityMatrix2 out = bitreset::diagonal_path_step(rho, 7, 0.3, 1.1);
  EXPECT_EQ(out.matrix(), rho.matrix());
}

TEST(DiagonalPath, CoherenceOnlyPicksUpPhase) {
  Matrix2c m;
  m << 0.6, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.4;
  const DensityMatrix2 rho(m);
  const DensityMatrix2 out = bitreset::diagonal_path_step(rho, 2, 0.5, 1.0);
  EXPECT_EQ(out.matrix()(0, 0), m(0, 0));
  EXPECT_EQ(out.matrix()(1, 1), m(1, 1));
  EXPECT_NEAR(std::abs(out.matrix()(1, 0)), std::abs(m(1, 0)), kTol);
  const Complex expected = m(1, 0) * std::polar(1.0, -0.5 * 2.5);
  EXPECT_NEAR(std::abs(out.matrix()(1, 0) - expected), 0.0, kTol);
}

TEST(Quench, ThirtyDegreeExample) {
  // p_upper = 0.2, gaps 1 -> 2, new basis rotated by pi/6: oracle values 1/2 and 1/5
  const Hamiltonian2 h_old = Hamiltonian2::diagonal(0.0, 1.0);
  const Hamiltonian2 h_new = Hamiltonian2::rotated(0.0, 2.0, std::numbers::pi / 6.0);
  const DensityMatrix2 rho = DensityMatrix2::diagonal(0.8, 0.2);
  EXPECT_NEAR(bitreset::sudden_quench_work(rho, h_old, h_new), 0.5, kTol);
  EXPECT_NEAR(bitreset::coherent_average_work(0.8, 0.2, 0.25, 1.0, 2.0), 0.5, kTol);
  const auto corrected = bitreset::corrected_quench_work(rho, h_old, h_new);
  EXPECT_NEAR(corrected.work, 0.2, kTol);
  EXPECT_FALSE(corrected.precondition_violated);
}

TEST(Quench, DegenerateHamiltonianThrows) {
  const Hamiltonian2 h = Hamiltonian2::diagonal(0.0, 1.0);
  const Hamiltonian2 flat = Hamiltonian2::diagonal(1.0, 1.0);
  EXPECT_THROW(bitreset::correction_unitary(h, flat), std::invalid_argument);
  EXPECT_THROW(bitreset::correction_unitary(flat, h), std::invalid_argument);
}

TEST(Quench, CoherentInputIsFlagged) {
  Matrix2c m;
  m << 0.6, 0.2, 0.2, 0.4;
  const auto w = bitreset::corrected_quench_work(DensityMatrix2(m), Hamiltonian2::diagonal(0, 1),
                                                 Hamiltonian2::diagonal(0, 2));
  EXPECT_TRUE(w.precondition_violated);
}

// ---- properties -----------------------------------------------------------

TEST(QuenchProperties, CorrectedWorkIsPopulationWeightedShift) {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Hamiltonian2 h_old = random_hamiltonian(gen);
    const Hamiltonian2 h_new = random_hamiltonian(gen);
    const double p_upper = u(gen);
    const DensityMatrix2 rho = DensityMatrix2::in_eigenbasis(h_old, 1.0 - p_upper, p_upper);
    const auto &a = h_old.eigen().energies;
    const auto &b = h_new.eigen().energies;
    const double expected = (1.0 - p_upper) * (b[0] - a[0]) + p_upper * (b[1] - a[1]);
    const auto got = bitreset::corrected_quench_work(rho, h_old, h_new);
    EXPECT_NEAR(got.work, expected, 1e-12);
    EXPECT_FALSE(got.precondition_violated);
    // the correction maps old eigenvectors onto new ones
    const auto u2 = bitreset::correction_unitary(h_old, h_new);
    const DensityMatrix2 rotated = u2.conjugate(rho);
    EXPECT_NEAR(rotated.population(h_new, 1), p_upper, 1e-12);
    EXPECT_LT(rotated.coherence(h_new), 1e-12);
  }
}

TEST(QuenchProperties, UncorrectedNeverCheaperWhenLowerLevelDominates) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double p_upper = 0.5 * u(gen);
    const double gap_old = 0.1 + 2 * u(gen), gap_new = 0.1 + 2 * u(gen);
    const double theta = std::numbers::pi * (u(gen) - 0.5);
    const Hamiltonian2 h_old = Hamiltonian2::diagonal(0.0, gap_old);
    const Hamiltonian2 h_new = Hamiltonian2::rotated(0.0, gap_new, theta);
    const DensityMatrix2 rho = DensityMatrix2::diagonal(1.0 - p_upper, p_upper);
    const double sudden = bitreset::sudden_quench_work(rho, h_old, h_new);
    const double s2 = std::pow(std::sin(theta), 2);
    EXPECT_NEAR(sudden, bitreset::coherent_average_work(1.0 - p_upper, p_upper, s2, gap_old, gap_new), 1e-12);
    EXPECT_GE(sudden, bitreset::corrected_quench_work(rho, h_old, h_new).work - 1e-12);
  }
}

}  // namespace
