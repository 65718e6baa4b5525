#include "holo/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace holo {

namespace {

constexpr double kNormTol = 1e-9;

std::vector<std::string> default_labels(Eigen::Index dim) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) labels.push_back("|" + std::to_string(i) + "⟩");
  return labels;
}

void check_labels(const std::vector<std::string>& labels, Eigen::Index dim) {
  if (static_cast<Eigen::Index>(labels.size()) != dim) {
    throw std::invalid_argument("basis label count does not match state dimension");
  }
}

}  // namespace

QuantumState::QuantumState(Kind kind, ComplexMatrix data, std::vector<std::string> labels)
    : kind_(kind), data_(std::move(data)), labels_(std::move(labels)) {}

QuantumState QuantumState::from_vector(ComplexVector amplitudes, std::vector<std::string> labels) {
  if (amplitudes.size() == 0) throw std::invalid_argument("empty state vector");
  if (std::abs(amplitudes.norm() - 1.0) > kNormTol) {
    throw std::invalid_argument("state vector is not normalized");
  }
  if (labels.empty()) labels = default_labels(amplitudes.size());
  check_labels(labels, amplitudes.size());
  return QuantumState(Kind::vector, ComplexMatrix(amplitudes), std::move(labels));
}

QuantumState QuantumState::from_density(ComplexMatrix rho, std::vector<std::string> labels) {
  if (rho.rows() == 0 || rho.rows() != rho.cols()) {
    throw std::invalid_argument("density matrix must be square and non-empty");
  }
  if (!is_hermitian(rho, kNormTol)) throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > kNormTol) {
    throw std::invalid_argument("density matrix trace differs from 1");
  }
  const ComplexMatrix sym = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kNormTol) {
    throw std::invalid_argument("density matrix is not positive semidefinite");
  }
  if (labels.empty()) labels = default_labels(rho.rows());
  check_labels(labels, rho.rows());
  return QuantumState(Kind::density, std::move(rho), std::move(labels));
}

ComplexVector QuantumState::vector() const {
  if (kind_ != Kind::vector) throw std::logic_error("mixed state has no state vector");
  return data_.col(0);
}

ComplexMatrix QuantumState::density() const {
  if (kind_ == Kind::density) return data_;
  return data_ * data_.adjoint();
}

Eigen::Index QuantumState::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::out_of_range("unknown basis label " + label);
  return static_cast<Eigen::Index>(it - labels_.begin());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

ComplexMatrix expm_hermitian_step(const ComplexMatrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const Eigen::VectorXd& w = es.eigenvalues();
  ComplexVector phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::exp(-kI * (w(k) * dt));
  const ComplexMatrix& v = es.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

ComplexMatrix expm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("expm requires a square matrix");
  if (m.size() == 0) return m;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m + m.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * scale) {
    // m = -i h with h Hermitian
    const ComplexMatrix h = kI * m;
    return expm_hermitian_step(0.5 * (h + h.adjoint()), 1.0);
  }
  return m.exp();
}

double overlap_fidelity(const QuantumState& a, const QuantumState& b) {
  if (!a.is_vector()) throw std::invalid_argument("overlap_fidelity expects a pure reference state");
  if (a.dim() != b.dim()) throw std::invalid_argument("overlap_fidelity dimension mismatch");
  const ComplexVector psi = a.vector();
  double value = 0.0;
  if (b.is_vector()) {
    value = std::norm(psi.dot(b.vector()));
  } else {
    value = (psi.adjoint() * b.density() * psi)(0, 0).real();
  }
  return std::clamp(value, 0.0, 1.0);
}

double unitary_distance_upto_phase(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols()) {
    throw std::invalid_argument("unitary_distance_upto_phase dimension mismatch");
  }
  const double d = static_cast<double>(u.rows());
  return 1.0 - std::abs((u.adjoint() * v).trace()) / d;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double unitarity_defect(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

ComplexVector basis_ket(Eigen::Index dim, Eigen::Index index) {
  ComplexVector v = ComplexVector::Zero(dim);
  v(index) = 1.0;
  return v;
}

ComplexMatrix outer(Eigen::Index dim, Eigen::Index row, Eigen::Index col) {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(row, col) = 1.0;
  return m;
}

namespace pauli {
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

}  // namespace holo
