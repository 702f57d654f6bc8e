#pragma once

// Dense complex linear algebra and quantum-information primitives.
//
// Qubit ordering is little-endian: qubit 0 is the least-significant bit of
// a basis index. tensor(a, b) puts `a` on the high-order bits, so the full
// register operator is A_{n-1} (x) ... (x) A_0.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qlab/error.hpp"

namespace qlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Qubit = std::size_t;
using QubitList = std::vector<Qubit>;

namespace tol {
inline constexpr double kUnitarity = 1e-10;
inline constexpr double kHermiticity = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kNormalization = 1e-10;
inline constexpr double kPsdFloor = -1e-10;
inline constexpr double kEntropyFloor = 1e-12;
inline constexpr double kTracePreserving = 1e-9;
}  // namespace tol

inline constexpr std::size_t kMaxQubits = 12;

enum class Pauli { I, X, Y, Z };

ComplexMatrix pauli_matrix(Pauli p);

class DensityMatrix;

class StateVector {
 public:
  /// |0...0> on n qubits.
  static StateVector zero(std::size_t n_qubits);
  static StateVector basis(std::size_t n_qubits, std::size_t index);
  /// Validates length 2^n and unit norm within tol::kNormalization.
  static StateVector from_amplitudes(ComplexVector amplitudes);

  std::size_t num_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  const ComplexVector& amplitudes() const noexcept { return amps_; }
  Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

  DensityMatrix to_density() const;

 private:
  StateVector(std::size_t n, ComplexVector amps) : n_(n), amps_(std::move(amps)) {}

  std::size_t n_;
  ComplexVector amps_;
};

/// Hermitian, unit-trace, positive semidefinite 2^n x 2^n matrix.
class DensityMatrix {
 public:
  static DensityMatrix zero_state(std::size_t n_qubits);
  static DensityMatrix maximally_mixed(std::size_t n_qubits);
  static DensityMatrix pure(const StateVector& psi);

  /// Full validation: Hermiticity, trace and PSD floor. Eigenvalues in
  /// [kPsdFloor, 0) are clipped to zero and the result renormalized.
  /// Throws Error{InvalidState} otherwise.
  static DensityMatrix from_matrix(ComplexMatrix m);

  /// Cheap path for matrices produced by trace-preserving completely
  /// positive maps of valid states: checks shape and trace only and
  /// re-Hermitizes.
  static DensityMatrix assume_valid(ComplexMatrix m);

  std::size_t num_qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  Complex operator()(std::size_t r, std::size_t c) const {
    return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  /// Smallest eigenvalue; used by invariant checks.
  double min_eigenvalue() const;

 private:
  DensityMatrix(std::size_t n, ComplexMatrix m) : n_(n), m_(std::move(m)) {}

  std::size_t n_;
  ComplexMatrix m_;
};

/// Trace-preserving set of Kraus operators acting on 2^k dimensions.
class KrausSet {
 public:
  /// Throws NotTracePreserving when sum K^dag K deviates from I by more than
  /// tol::kTracePreserving, DimensionMismatch on ragged or non-qubit shapes.
  explicit KrausSet(std::vector<ComplexMatrix> operators);

  const std::vector<ComplexMatrix>& operators() const noexcept { return ops_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(ops_.front().rows()); }
  std::size_t num_qubits() const noexcept { return n_; }

 private:
  std::vector<ComplexMatrix> ops_;
  std::size_t n_;
};

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
DensityMatrix tensor(const DensityMatrix& high, const DensityMatrix& low);
ComplexMatrix adjoint(const ComplexMatrix& a);

bool is_unitary(const ComplexMatrix& u, double tolerance = tol::kUnitarity);
bool is_hermitian(const ComplexMatrix& m, double tolerance = tol::kHermiticity);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Number of qubits for a 2^k dimension, or throws DimensionMismatch.
std::size_t qubits_for_dim(Eigen::Index dim);

/// Throws BadTargets unless targets are distinct, below n_qubits and
/// (when arity != 0) exactly `arity` long.
void check_targets(std::span<const Qubit> targets, std::size_t n_qubits, std::size_t arity = 0);

/// Lifts `op` (acting on targets, targets[k] <-> local bit k) to the full
/// n-qubit space with identity elsewhere.
ComplexMatrix embed_operator(const ComplexMatrix& op, std::span<const Qubit> targets,
                             std::size_t n_qubits);

DensityMatrix evolve_density(const DensityMatrix& rho, const ComplexMatrix& u,
                             std::span<const Qubit> targets);
DensityMatrix apply_kraus(const DensityMatrix& rho, const KrausSet& kraus,
                          std::span<const Qubit> targets);

/// Reduced state on `keep`; output qubit k corresponds to keep[k].
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Qubit> keep);
/// Same on an arbitrary (possibly unnormalized) operator over n qubits.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t n_qubits,
                            std::span<const Qubit> keep);

double vn_entropy_bits(const DensityMatrix& rho);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace qlab
