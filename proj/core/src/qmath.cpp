#include "qlab/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace qlab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonUnitary: return "NonUnitary";
    case ErrorCode::BadTargets: return "BadTargets";
    case ErrorCode::NotTracePreserving: return "NotTracePreserving";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::BadClbit: return "BadClbit";
    case ErrorCode::ClbitConflict: return "ClbitConflict";
    case ErrorCode::NonUnitaryInstruction: return "NonUnitaryInstruction";
    case ErrorCode::BadProbability: return "BadProbability";
    case ErrorCode::TooManyQubits: return "TooManyQubits";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::BadMemoryState: return "BadMemoryState";
    case ErrorCode::BadPartition: return "BadPartition";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::BadLabel: return "BadLabel";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

namespace {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

// Spreads bit k of `compact` to bit positions[k].
std::size_t scatter_bits(std::size_t compact, std::span<const Qubit> positions) {
  std::size_t out = 0;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    out |= ((compact >> k) & 1u) << positions[k];
  }
  return out;
}

std::size_t mask_of(std::span<const Qubit> positions) {
  std::size_t mask = 0;
  for (Qubit q : positions) mask |= std::size_t{1} << q;
  return mask;
}

}  // namespace

ComplexMatrix pauli_matrix(Pauli p) {
  const Complex i{0.0, 1.0};
  ComplexMatrix m(2, 2);
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -i, i, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

std::size_t qubits_for_dim(Eigen::Index dim) {
  if (dim < 1) throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimension " + std::to_string(dim) + " is not a power of two");
  }
  return n;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector StateVector::zero(std::size_t n_qubits) { return basis(n_qubits, 0); }

StateVector StateVector::basis(std::size_t n_qubits, std::size_t index) {
  if (n_qubits > kMaxQubits) throw Error(ErrorCode::TooManyQubits, "state too large");
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim) throw Error(ErrorCode::BadParams, "basis index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(n_qubits, std::move(v));
}

StateVector StateVector::from_amplitudes(ComplexVector amplitudes) {
  const std::size_t n = qubits_for_dim(amplitudes.size());
  if (!all_finite(amplitudes)) throw Error(ErrorCode::InvalidState, "non-finite amplitude");
  const double norm2 = amplitudes.squaredNorm();
  if (std::abs(norm2 - 1.0) > tol::kNormalization) {
    throw Error(ErrorCode::InvalidState, "amplitudes not normalized");
  }
  return StateVector(n, std::move(amplitudes));
}

DensityMatrix StateVector::to_density() const { return DensityMatrix::pure(*this); }

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix DensityMatrix::zero_state(std::size_t n_qubits) {
  return pure(StateVector::zero(n_qubits));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n_qubits) {
  if (n_qubits > kMaxQubits) throw Error(ErrorCode::TooManyQubits, "state too large");
  const auto dim = Eigen::Index{1} << n_qubits;
  return DensityMatrix(n_qubits, ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  const ComplexVector& a = psi.amplitudes();
  return DensityMatrix(psi.num_qubits(), a * a.adjoint());
}

DensityMatrix DensityMatrix::assume_valid(ComplexMatrix m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "density matrix not square");
  const std::size_t n = qubits_for_dim(m.rows());
  const Complex tr = m.trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > 1e-8) {
    std::ostringstream os;
    os << "trace " << tr << " drifted from 1";
    throw Error(ErrorCode::InvalidState, os.str());
  }
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  return DensityMatrix(n, std::move(h));
}

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "density matrix not square");
  const std::size_t n = qubits_for_dim(m.rows());
  if (!all_finite(m)) throw Error(ErrorCode::InvalidState, "non-finite entry");
  if (!is_hermitian(m)) throw Error(ErrorCode::InvalidState, "matrix is not Hermitian");
  const Complex tr = m.trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > tol::kTrace) {
    throw Error(ErrorCode::InvalidState, "trace is not 1");
  }
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  if (lambda.minCoeff() < tol::kPsdFloor) {
    throw Error(ErrorCode::InvalidState, "matrix has a negative eigenvalue");
  }
  if (lambda.minCoeff() < 0.0) {
    Eigen::VectorXd clipped = lambda.cwiseMax(0.0);
    clipped /= clipped.sum();
    h = es.eigenvectors() * clipped.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  }
  return DensityMatrix(n, std::move(h));
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// KrausSet

KrausSet::KrausSet(std::vector<ComplexMatrix> operators) : ops_(std::move(operators)), n_(0) {
  if (ops_.empty()) throw Error(ErrorCode::NotTracePreserving, "empty Kraus set");
  const Eigen::Index d = ops_.front().rows();
  for (const auto& k : ops_) {
    if (k.rows() != d || k.cols() != d) {
      throw Error(ErrorCode::DimensionMismatch, "Kraus operators must share one square shape");
    }
    if (!all_finite(k)) throw Error(ErrorCode::NotTracePreserving, "non-finite Kraus entry");
  }
  n_ = qubits_for_dim(d);
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& k : ops_) sum.noalias() += k.adjoint() * k;
  if (max_abs_diff(sum, ComplexMatrix::Identity(d, d)) > tol::kTracePreserving) {
    throw Error(ErrorCode::NotTracePreserving, "sum of K^dag K differs from identity");
  }
}

// ---------------------------------------------------------------------------
// Free functions

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix tensor(const DensityMatrix& high, const DensityMatrix& low) {
  return DensityMatrix::assume_valid(tensor(high.matrix(), low.matrix()));
}

ComplexMatrix adjoint(const ComplexMatrix& a) { return a.adjoint(); }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

bool is_unitary(const ComplexMatrix& u, double tolerance) {
  if (u.rows() != u.cols() || u.rows() == 0) return false;
  if (!all_finite(u)) return false;
  return max_abs_diff(u.adjoint() * u, ComplexMatrix::Identity(u.rows(), u.cols())) <= tolerance;
}

bool is_hermitian(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return max_abs_diff(m, m.adjoint()) <= tolerance;
}

void check_targets(std::span<const Qubit> targets, std::size_t n_qubits, std::size_t arity) {
  if (arity != 0 && targets.size() != arity) {
    throw Error(ErrorCode::BadTargets, "expected " + std::to_string(arity) + " targets, got " +
                                           std::to_string(targets.size()));
  }
  if (targets.empty()) throw Error(ErrorCode::BadTargets, "empty target list");
  std::unordered_set<Qubit> seen;
  for (Qubit q : targets) {
    if (q >= n_qubits) {
      throw Error(ErrorCode::BadTargets, "qubit " + std::to_string(q) + " out of range for " +
                                             std::to_string(n_qubits) + " qubits");
    }
    if (!seen.insert(q).second) {
      throw Error(ErrorCode::BadTargets, "duplicate target qubit " + std::to_string(q));
    }
  }
}

ComplexMatrix embed_operator(const ComplexMatrix& op, std::span<const Qubit> targets,
                             std::size_t n_qubits) {
  if (op.rows() != op.cols()) throw Error(ErrorCode::DimensionMismatch, "operator not square");
  if (op.rows() != (Eigen::Index{1} << targets.size())) {
    throw Error(ErrorCode::DimensionMismatch, "operator dimension does not match target count");
  }
  check_targets(targets, n_qubits);
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t local_dim = std::size_t{1} << targets.size();
  const std::size_t target_mask = mask_of(targets);
  ComplexMatrix full = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim),
                                           static_cast<Eigen::Index>(dim));
  for (std::size_t rest = 0; rest < dim; ++rest) {
    if (rest & target_mask) continue;
    for (std::size_t li = 0; li < local_dim; ++li) {
      const std::size_t row = rest | scatter_bits(li, targets);
      for (std::size_t lj = 0; lj < local_dim; ++lj) {
        const Complex v = op(static_cast<Eigen::Index>(li), static_cast<Eigen::Index>(lj));
        if (v == Complex{}) continue;
        const std::size_t col = rest | scatter_bits(lj, targets);
        full(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = v;
      }
    }
  }
  return full;
}

DensityMatrix evolve_density(const DensityMatrix& rho, const ComplexMatrix& u,
                             std::span<const Qubit> targets) {
  check_targets(targets, rho.num_qubits());
  if (!is_unitary(u)) throw Error(ErrorCode::NonUnitary, "gate matrix is not unitary");
  const ComplexMatrix e = embed_operator(u, targets, rho.num_qubits());
  return DensityMatrix::assume_valid(e * rho.matrix() * e.adjoint());
}

DensityMatrix apply_kraus(const DensityMatrix& rho, const KrausSet& kraus,
                          std::span<const Qubit> targets) {
  check_targets(targets, rho.num_qubits(), kraus.num_qubits());
  const auto d = static_cast<Eigen::Index>(rho.dim());
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& k : kraus.operators()) {
    const ComplexMatrix e = embed_operator(k, targets, rho.num_qubits());
    out.noalias() += e * rho.matrix() * e.adjoint();
  }
  return DensityMatrix::assume_valid(std::move(out));
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t n_qubits,
                            std::span<const Qubit> keep) {
  if (m.rows() != m.cols() || m.rows() != (Eigen::Index{1} << n_qubits)) {
    throw Error(ErrorCode::DimensionMismatch, "operator does not match qubit count");
  }
  check_targets(keep, n_qubits);
  QubitList traced;
  const std::size_t keep_mask = mask_of(keep);
  for (Qubit q = 0; q < n_qubits; ++q) {
    if (!(keep_mask & (std::size_t{1} << q))) traced.push_back(q);
  }
  const std::size_t kd = std::size_t{1} << keep.size();
  const std::size_t td = std::size_t{1} << traced.size();
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(kd),
                                          static_cast<Eigen::Index>(kd));
  for (std::size_t i = 0; i < kd; ++i) {
    const std::size_t ri = scatter_bits(i, keep);
    for (std::size_t j = 0; j < kd; ++j) {
      const std::size_t cj = scatter_bits(j, keep);
      Complex acc{};
      for (std::size_t t = 0; t < td; ++t) {
        const std::size_t tb = scatter_bits(t, traced);
        acc += m(static_cast<Eigen::Index>(ri | tb), static_cast<Eigen::Index>(cj | tb));
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Qubit> keep) {
  return DensityMatrix::assume_valid(partial_trace(rho.matrix(), rho.num_qubits(), keep));
}

double vn_entropy_bits(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double lambda : es.eigenvalues()) {
    if (lambda > tol::kEntropyFloor) s -= lambda * std::log2(lambda);
  }
  return std::max(s, 0.0);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "trace_distance of states with different dimension");
  }
  const ComplexMatrix diff = a.matrix() - b.matrix();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (diff + diff.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  const double d = 0.5 * es.eigenvalues().cwiseAbs().sum();
  return std::clamp(d, 0.0, 1.0);
}

}  // namespace qlab
