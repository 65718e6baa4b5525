#pragma once

// Dense complex linear algebra and state containers for small Hilbert spaces.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace holo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// A normalized state vector or a unit-trace density matrix on a labelled basis.
class QuantumState {
 public:
  enum class Kind { vector, density };

  /// Throws std::invalid_argument if the vector is not normalized to 1e-9.
  static QuantumState from_vector(ComplexVector amplitudes, std::vector<std::string> labels = {});
  /// Throws std::invalid_argument unless rho is Hermitian, unit-trace and PSD to -1e-9.
  static QuantumState from_density(ComplexMatrix rho, std::vector<std::string> labels = {});

  Kind kind() const { return kind_; }
  bool is_vector() const { return kind_ == Kind::vector; }
  Eigen::Index dim() const { return data_.rows(); }

  /// Column vector for pure states, square matrix for mixed ones.
  const ComplexMatrix& data() const { return data_; }
  const std::vector<std::string>& labels() const { return labels_; }

  ComplexVector vector() const;
  ComplexMatrix density() const;

  /// Index of a basis label, throws std::out_of_range when absent.
  Eigen::Index index_of(const std::string& label) const;

 private:
  QuantumState(Kind kind, ComplexMatrix data, std::vector<std::string> labels);

  Kind kind_;
  ComplexMatrix data_;
  std::vector<std::string> labels_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product of a list of factors, left to right.
ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors);

/// Matrix exponential. Anti-Hermitian input goes through a Hermitian
/// eigendecomposition so the result is unitary to machine precision.
ComplexMatrix expm(const ComplexMatrix& m);

/// exp(-i h dt) for Hermitian h.
ComplexMatrix expm_hermitian_step(const ComplexMatrix& h, double dt);

/// |<a|b>|^2 for two vectors, <a|rho_b|a> for a density matrix b.
double overlap_fidelity(const QuantumState& a, const QuantumState& b);

/// 1 - |Tr(u^dagger v)| / d. Zero iff u and v agree up to a global phase.
double unitary_distance_upto_phase(const ComplexMatrix& u, const ComplexMatrix& v);

bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12);

/// max |U^dagger U - I| entry.
double unitarity_defect(const ComplexMatrix& u);

ComplexVector basis_ket(Eigen::Index dim, Eigen::Index index);

/// |row><col| in a space of dimension dim.
ComplexMatrix outer(Eigen::Index dim, Eigen::Index row, Eigen::Index col);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

}  // namespace holo
