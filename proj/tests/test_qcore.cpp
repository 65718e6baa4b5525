#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "holo/qcore.hpp"

using namespace holo;

namespace {

ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = scale * Complex(n(rng), n(rng));
  return m;
}

ComplexMatrix taylor_expm(const ComplexMatrix& m, int terms) {
  ComplexMatrix sum = ComplexMatrix::Identity(m.rows(), m.cols());
  ComplexMatrix term = sum;
  for (int k = 1; k < terms; ++k) {
    term = term * m / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Kron, IdentityTimesIdentity) {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  EXPECT_EQ(max_abs(kron(i2, i2) - ComplexMatrix::Identity(4, 4)), 0.0);
}

TEST(Kron, PauliXWithProjector) {
  const ComplexMatrix k = kron(pauli::x(), outer(2, 0, 0));
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect(0, 2) = 1.0;
  expect(2, 0) = 1.0;
  EXPECT_EQ(max_abs(k - expect), 0.0);
}

TEST(Kron, MatchesIndexFormula) {
  std::mt19937 rng(7);
  const ComplexMatrix a = random_matrix(2, 2, rng);
  const ComplexMatrix b = random_matrix(3, 3, rng);
  const ComplexMatrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) EXPECT_EQ(k(3 * i + p, 3 * j + q), a(i, j) * b(p, q));
}

TEST(Kron, AllIsAssociativeProduct) {
  std::mt19937 rng(3);
  const ComplexMatrix a = random_matrix(2, 2, rng), b = random_matrix(3, 2, rng),
                      c = random_matrix(2, 3, rng);
  EXPECT_LT(max_abs(kron_all({a, b, c}) - kron(kron(a, b), c)), 1e-14);
}

TEST(Expm, ZeroIsIdentity) {
  EXPECT_LT(max_abs(expm(ComplexMatrix::Zero(3, 3)) - ComplexMatrix::Identity(3, 3)), 1e-15);
}

TEST(Expm, PauliRotation) {
  const ComplexMatrix u = expm(kI * (kPi / 2) * pauli::x());
  EXPECT_LT(max_abs(u - kI * pauli::x()), 1e-14);
}

TEST(Expm, MatchesTaylorSeries) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    ComplexMatrix m = random_matrix(5, 5, rng);
    m /= m.operatorNorm();
    EXPECT_LT(max_abs(expm(m) - taylor_expm(m, 30)), 1e-10);
  }
}

TEST(Expm, AntiHermitianMatchesTaylor) {
  std::mt19937 rng(5);
  ComplexMatrix h = random_matrix(4, 4, rng);
  h = 0.5 * (h + h.adjoint().eval());
  h /= h.operatorNorm();
  EXPECT_LT(max_abs(expm(-kI * h) - taylor_expm(-kI * h, 30)), 1e-12);
  EXPECT_LT(max_abs(expm_hermitian_step(h, 0.7) - taylor_expm(-kI * 0.7 * h, 30)), 1e-12);
}

TEST(Fidelity, BasisStates) {
  const auto zero = QuantumState::from_vector(basis_ket(2, 0));
  const auto one = QuantumState::from_vector(basis_ket(2, 1));
  EXPECT_NEAR(overlap_fidelity(zero, zero), 1.0, 1e-15);
  EXPECT_NEAR(overlap_fidelity(zero, one), 0.0, 1e-15);
}

TEST(Fidelity, PlusAgainstMaximallyMixed) {
  ComplexVector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const auto mixed = QuantumState::from_density(0.5 * ComplexMatrix::Identity(2, 2));
  EXPECT_NEAR(overlap_fidelity(QuantumState::from_vector(plus), mixed), 0.5, 1e-15);
}

TEST(Fidelity, RejectsUnnormalized) {
  EXPECT_THROW(QuantumState::from_vector(2.0 * basis_ket(2, 0)), std::invalid_argument);
}

TEST(UnitaryDistance, GlobalPhaseInvariant) {
  const ComplexMatrix i = ComplexMatrix::Identity(2, 2);
  EXPECT_NEAR(unitary_distance_upto_phase(i, std::exp(kI * kPi / 7.0) * i), 0.0, 1e-15);
  EXPECT_NEAR(unitary_distance_upto_phase(i, pauli::x()), 1.0, 1e-15);
}

TEST(UnitaryDistance, NearbyRotations) {
  auto rx = [](double a) { return expm(-kI * (a / 2) * pauli::x()); };
  EXPECT_NEAR(unitary_distance_upto_phase(rx(kPi / 2), rx(kPi / 2 + 0.01)),
              1.0 - std::abs(std::cos(0.005)), 1e-12);
}

TEST(Hermitian, DetectsAsymmetry) {
  EXPECT_TRUE(is_hermitian(pauli::y()));
  ComplexMatrix m = pauli::y();
  m(0, 1) += 1e-6;
  EXPECT_FALSE(is_hermitian(m));
  EXPECT_LT(unitarity_defect(pauli::y()), 1e-15);
}
