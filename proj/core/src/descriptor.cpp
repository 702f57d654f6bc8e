#include "qlab/descriptor.hpp"

#include <algorithm>
#include <cctype>

namespace qlab {

const ComplexMatrix& PauliTriple::operator[](Pauli axis) const {
  switch (axis) {
    case Pauli::X: return x;
    case Pauli::Y: return y;
    case Pauli::Z: return z;
    case Pauli::I: break;
  }
  throw Error(ErrorCode::BadParams, "a descriptor has no identity component");
}

DescriptorFrame init_frame(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::BadParams, "descriptor frame needs at least one qubit");
  if (n > kMaxDescriptorQubits) {
    throw Error(ErrorCode::TooManyQubits, "descriptor frames support at most " +
                                              std::to_string(kMaxDescriptorQubits) + " qubits");
  }
  DescriptorFrame f;
  f.n_ = n;
  f.t_ = 0;
  const auto dim = Eigen::Index{1} << n;
  f.prefix_ = ComplexMatrix::Identity(dim, dim);
  f.triples_.reserve(n);
  for (Qubit q = 0; q < n; ++q) {
    const QubitList t{q};
    f.triples_.push_back({embed_operator(pauli_matrix(Pauli::X), t, n),
                          embed_operator(pauli_matrix(Pauli::Y), t, n),
                          embed_operator(pauli_matrix(Pauli::Z), t, n)});
  }
  return f;
}

DescriptorFrame advance(const DescriptorFrame& f, const Instruction& instr) {
  const auto* op = std::get_if<UnitaryOp>(&instr);
  if (op == nullptr) {
    throw Error(ErrorCode::NonUnitaryInstruction, "descriptors only evolve under unitaries");
  }
  check_targets(op->targets, f.n_, op->gate.arity());
  if (!is_unitary(op->gate.matrix)) throw Error(ErrorCode::NonUnitary, "gate is not unitary");

  DescriptorFrame next;
  next.n_ = f.n_;
  next.t_ = f.t_ + 1;
  next.prefix_ = embed_operator(op->gate.matrix, op->targets, f.n_) * f.prefix_;
  const ComplexMatrix& u = next.prefix_;
  const ComplexMatrix u_dag = u.adjoint();
  next.triples_.reserve(f.n_);
  for (Qubit q = 0; q < f.n_; ++q) {
    const QubitList t{q};
    next.triples_.push_back({u_dag * embed_operator(pauli_matrix(Pauli::X), t, f.n_) * u,
                             u_dag * embed_operator(pauli_matrix(Pauli::Y), t, f.n_) * u,
                             u_dag * embed_operator(pauli_matrix(Pauli::Z), t, f.n_) * u});
  }
  return next;
}

DescriptorFrame evolve_frame(const Circuit& c) {
  DescriptorFrame f = init_frame(c.n_qubits());
  for (const auto& instr : c.instructions()) f = qlab::advance(f, instr);
  return f;
}

double triple_delta(const PauliTriple& a, const PauliTriple& b) {
  return std::max({max_abs_diff(a.x, b.x), max_abs_diff(a.y, b.y), max_abs_diff(a.z, b.z)});
}

LocalityReport locality_audit(const Circuit& c) {
  LocalityReport report;
  if (!c.unitary_only()) {
    throw Error(ErrorCode::NonUnitaryInstruction, "locality audit needs a unitary-only circuit");
  }
  ensure_valid(c);
  if (c.size() == 0) return report;
  DescriptorFrame f = init_frame(c.n_qubits());
  for (std::size_t k = 0; k < c.size(); ++k) {
    const Instruction& instr = c.instructions()[k];
    DescriptorFrame next = qlab::advance(f, instr);
    const QubitList s = support(instr);
    double worst = 0.0;
    for (Qubit q = 0; q < c.n_qubits(); ++q) {
      if (std::find(s.begin(), s.end(), q) != s.end()) continue;
      worst = std::max(worst, triple_delta(f.triple(q), next.triple(q)));
    }
    const bool pass = worst <= kLocalityTolerance;
    report.steps.push_back({k, worst, pass});
    report.overall = report.overall && pass;
    f = std::move(next);
  }
  return report;
}

nlohmann::json to_json(const LocalityReport& report) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : report.steps) {
    steps.push_back(
        {{"instr", s.instruction}, {"max_offsupport_delta", s.max_offsupport_delta},
         {"pass", s.pass}});
  }
  return {{"steps", std::move(steps)}, {"overall", report.overall}};
}

namespace {

bool same_shape(const Circuit& a, const Circuit& b) {
  if (a.n_qubits() != b.n_qubits() || a.n_clbits() != b.n_clbits() || a.size() != b.size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto& ia = a.instructions()[k];
    const auto& ib = b.instructions()[k];
    if (ia.index() != ib.index() || support(ia) != support(ib)) return false;
    const auto* ua = std::get_if<UnitaryOp>(&ia);
    const auto* ub = std::get_if<UnitaryOp>(&ib);
    if (ua != nullptr && ua->gate.kind != ub->gate.kind) return false;
  }
  return true;
}

}  // namespace

DependenceResult dependence_probe(const ParamCircuitBuilder& builder,
                                  std::span<const double> base_params, std::size_t param,
                                  std::array<double, 2> values, Qubit qubit) {
  if (param >= base_params.size()) {
    throw Error(ErrorCode::BadParams, "probe parameter index out of range");
  }
  std::vector<double> p(base_params.begin(), base_params.end());
  p[param] = values[0];
  const Circuit first = builder(p);
  p[param] = values[1];
  const Circuit second = builder(p);
  if (!same_shape(first, second)) {
    throw Error(ErrorCode::ShapeMismatch, "builder produced circuits of different shape");
  }
  if (qubit >= first.n_qubits()) throw Error(ErrorCode::BadTargets, "probe qubit out of range");
  const DescriptorFrame fa = evolve_frame(first);
  const DescriptorFrame fb = evolve_frame(second);
  const double delta = triple_delta(fa.triple(qubit), fb.triple(qubit));
  return {delta > kDependenceThreshold, delta};
}

PauliProduct parse_pauli_product(std::string_view text) {
  PauliProduct out;
  out.reserve(text.size());
  for (char ch : text) {
    switch (std::toupper(static_cast<unsigned char>(ch))) {
      case 'I':
      case '_': out.push_back(Pauli::I); break;
      case 'X': out.push_back(Pauli::X); break;
      case 'Y': out.push_back(Pauli::Y); break;
      case 'Z': out.push_back(Pauli::Z); break;
      default: throw Error(ErrorCode::BadParams, std::string("bad Pauli letter '") + ch + "'");
    }
  }
  return out;
}

double expectation(const DescriptorFrame& f, const PauliProduct& observable,
                   const StateVector& initial) {
  if (observable.size() > f.num_qubits() || initial.num_qubits() != f.num_qubits()) {
    throw Error(ErrorCode::DimensionMismatch, "observable, frame and state widths differ");
  }
  const auto dim = Eigen::Index{1} << f.num_qubits();
  ComplexMatrix product = ComplexMatrix::Identity(dim, dim);
  for (Qubit q = 0; q < observable.size(); ++q) {
    if (observable[q] == Pauli::I) continue;
    product = product * f.descriptor(q, observable[q]);
  }
  const ComplexVector& psi = initial.amplitudes();
  const Complex value = psi.dot(product * psi);
  if (std::abs(value.imag()) > 1e-9) {
    throw Error(ErrorCode::InvalidState, "expectation has an imaginary residue");
  }
  return value.real();
}

DensityMatrix reconstruct_marginal(const DescriptorFrame& f, Qubit q, const StateVector& initial) {
  if (q >= f.num_qubits()) throw Error(ErrorCode::BadTargets, "qubit out of range");
  ComplexMatrix rho = pauli_matrix(Pauli::I);
  for (Pauli axis : {Pauli::X, Pauli::Y, Pauli::Z}) {
    PauliProduct obs(f.num_qubits(), Pauli::I);
    obs[q] = axis;
    rho += expectation(f, obs, initial) * pauli_matrix(axis);
  }
  return DensityMatrix::assume_valid(0.5 * rho);
}

}  // namespace qlab
