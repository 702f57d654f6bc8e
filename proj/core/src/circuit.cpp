#include "qlab/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "qlab/rng.hpp"

namespace qlab {

std::string_view to_string(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::I: return "I";
    case GateKind::RX: return "RX";
    case GateKind::CNOT: return "CNOT";
    case GateKind::SWAP: return "SWAP";
    case GateKind::CH: return "CH";
    case GateKind::CCX: return "CCX";
  }
  return "?";
}

GateKind gate_kind_from_string(std::string_view name) {
  std::string up(name);
  std::transform(up.begin(), up.end(), up.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  static const std::map<std::string, GateKind, std::less<>> kinds = {
      {"H", GateKind::H},       {"X", GateKind::X},       {"Y", GateKind::Y},
      {"Z", GateKind::Z},       {"I", GateKind::I},       {"ID", GateKind::I},
      {"RX", GateKind::RX},     {"CNOT", GateKind::CNOT}, {"CX", GateKind::CNOT},
      {"SWAP", GateKind::SWAP}, {"CH", GateKind::CH},     {"CCX", GateKind::CCX},
      {"TOFFOLI", GateKind::CCX}};
  auto it = kinds.find(up);
  if (it == kinds.end()) throw Error(ErrorCode::UnknownKind, "unknown gate kind '" + up + "'");
  return it->second;
}

std::size_t gate_arity(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::CNOT:
    case GateKind::SWAP:
    case GateKind::CH: return 2;
    case GateKind::CCX: return 3;
    default: return 1;
  }
}

namespace {

// Controlled version of a one-qubit gate with control = local bit 0 and
// target = local bit 1.
ComplexMatrix controlled(const ComplexMatrix& u) {
  ComplexMatrix m = ComplexMatrix::Identity(4, 4);
  m(1, 1) = u(0, 0);
  m(1, 3) = u(0, 1);
  m(3, 1) = u(1, 0);
  m(3, 3) = u(1, 1);
  return m;
}

ComplexMatrix hadamard() {
  ComplexMatrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

}  // namespace

Gate make_gate(GateKind kind, std::span<const double> params) {
  const bool wants_theta = kind == GateKind::RX;
  if (params.size() != (wants_theta ? 1u : 0u)) {
    throw Error(ErrorCode::BadParams, std::string(to_string(kind)) + " takes " +
                                          (wants_theta ? "one parameter" : "no parameters"));
  }
  Gate g{kind, 0.0, {}};
  switch (kind) {
    case GateKind::H: g.matrix = hadamard(); break;
    case GateKind::X: g.matrix = pauli_matrix(Pauli::X); break;
    case GateKind::Y: g.matrix = pauli_matrix(Pauli::Y); break;
    case GateKind::Z: g.matrix = pauli_matrix(Pauli::Z); break;
    case GateKind::I: g.matrix = pauli_matrix(Pauli::I); break;
    case GateKind::RX: {
      const double theta = params[0];
      if (!std::isfinite(theta)) throw Error(ErrorCode::BadParams, "RX angle must be finite");
      g.theta = theta;
      const Complex c{std::cos(theta / 2.0), 0.0};
      const Complex s{0.0, -std::sin(theta / 2.0)};
      g.matrix.resize(2, 2);
      g.matrix << c, s, s, c;
      break;
    }
    case GateKind::CNOT: g.matrix = controlled(pauli_matrix(Pauli::X)); break;
    case GateKind::CH: g.matrix = controlled(hadamard()); break;
    case GateKind::SWAP:
      g.matrix = ComplexMatrix::Zero(4, 4);
      g.matrix(0, 0) = g.matrix(1, 2) = g.matrix(2, 1) = g.matrix(3, 3) = 1.0;
      break;
    case GateKind::CCX:
      g.matrix = ComplexMatrix::Identity(8, 8);
      g.matrix(3, 3) = g.matrix(7, 7) = 0.0;
      g.matrix(3, 7) = g.matrix(7, 3) = 1.0;
      break;
  }
  return g;
}

Gate make_gate(std::string_view kind, std::span<const double> params) {
  return make_gate(gate_kind_from_string(kind), params);
}

QubitList support(const Instruction& instr) {
  return std::visit(
      [](const auto& op) -> QubitList {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, UnitaryOp> || std::is_same_v<T, ChannelOp>) {
          return op.targets;
        } else {
          return {op.target};
        }
      },
      instr);
}

bool is_unitary(const Instruction& instr) noexcept {
  return std::holds_alternative<UnitaryOp>(instr);
}

// ---------------------------------------------------------------------------
// Circuit

Circuit::Circuit(std::size_t n_qubits, std::size_t n_clbits)
    : n_qubits_(n_qubits), n_clbits_(n_clbits) {
  if (n_qubits > kMaxQubits) throw Error(ErrorCode::TooManyQubits, "circuit too wide");
}

bool Circuit::unitary_only() const noexcept {
  return std::all_of(instrs_.begin(), instrs_.end(),
                     [](const Instruction& in) { return is_unitary(in); });
}

Circuit& Circuit::append(Instruction instr) {
  instrs_.push_back(std::move(instr));
  return *this;
}

Circuit& Circuit::gate(GateKind kind, QubitList targets, std::span<const double> params) {
  return append(UnitaryOp{make_gate(kind, params), std::move(targets)});
}

Circuit& Circuit::rx(double theta, Qubit q) {
  const double p[] = {theta};
  return gate(GateKind::RX, {q}, p);
}

Circuit& Circuit::channel(KrausSet kraus, QubitList targets, std::string label) {
  return append(ChannelOp{std::move(kraus), std::move(targets), std::move(label)});
}

Circuit& Circuit::reset(Qubit q) { return append(ResetOp{q}); }

Circuit& Circuit::measure(Qubit q, std::size_t clbit) { return append(MeasureOp{q, clbit}); }

ComplexMatrix Circuit::unitary() const {
  const auto dim = Eigen::Index{1} << n_qubits_;
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (std::size_t k = 0; k < instrs_.size(); ++k) {
    const auto* op = std::get_if<UnitaryOp>(&instrs_[k]);
    if (op == nullptr) {
      throw Error(ErrorCode::NonUnitaryInstruction,
                  "instruction " + std::to_string(k) + " is not unitary");
    }
    u = embed_operator(op->gate.matrix, op->targets, n_qubits_) * u;
  }
  return u;
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Violation> validate(const Circuit& c) {
  std::vector<Violation> out;
  std::set<std::size_t> written;
  for (std::size_t k = 0; k < c.instructions().size(); ++k) {
    const Instruction& instr = c.instructions()[k];
    const QubitList targets = support(instr);
    std::size_t arity = 0;
    if (const auto* u = std::get_if<UnitaryOp>(&instr)) {
      arity = u->gate.arity();
      if (!qlab::is_unitary(u->gate.matrix)) {
        out.push_back({k, ErrorCode::NonUnitary, "gate matrix is not unitary"});
      }
    } else if (const auto* ch = std::get_if<ChannelOp>(&instr)) {
      arity = ch->kraus.num_qubits();
    }
    try {
      check_targets(targets, c.n_qubits(), arity);
    } catch (const Error& e) {
      out.push_back({k, e.code(), e.what()});
    }
    if (const auto* m = std::get_if<MeasureOp>(&instr)) {
      if (m->clbit >= c.n_clbits()) {
        out.push_back({k, ErrorCode::BadClbit,
                       "clbit " + std::to_string(m->clbit) + " out of range for " +
                           std::to_string(c.n_clbits()) + " clbits"});
      } else if (!written.insert(m->clbit).second) {
        out.push_back({k, ErrorCode::ClbitConflict,
                       "clbit " + std::to_string(m->clbit) + " is written twice"});
      }
    }
  }
  return out;
}

void ensure_valid(const Circuit& c) {
  const auto violations = validate(c);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw Error(v.code, "instruction " + std::to_string(v.instruction) + ": " + v.message);
  }
}

// ---------------------------------------------------------------------------
// Statevector backend

StateVector run_statevector(const Circuit& c) {
  return run_statevector(c, StateVector::zero(c.n_qubits()));
}

StateVector run_statevector(const Circuit& c, const StateVector& initial) {
  if (initial.num_qubits() != c.n_qubits()) {
    throw Error(ErrorCode::DimensionMismatch, "initial state width differs from circuit");
  }
  ensure_valid(c);
  ComplexVector psi = initial.amplitudes();
  for (std::size_t k = 0; k < c.size(); ++k) {
    const auto* op = std::get_if<UnitaryOp>(&c.instructions()[k]);
    if (op == nullptr) {
      throw Error(ErrorCode::NonUnitaryInstruction,
                  "statevector backend cannot run instruction " + std::to_string(k));
    }
    psi = embed_operator(op->gate.matrix, op->targets, c.n_qubits()) * psi;
  }
  psi.normalize();
  return StateVector::from_amplitudes(std::move(psi));
}

// ---------------------------------------------------------------------------
// Density backend

namespace {

void conjugate_into(ComplexMatrix& acc, const ComplexMatrix& rho, const ComplexMatrix& e) {
  acc.noalias() += e * rho * e.adjoint();
}

// P_bit rho P_bit for the projector onto outcome `bit` of qubit `q`.
ComplexMatrix project(const ComplexMatrix& rho, Qubit q, int bit) {
  ComplexMatrix out = rho;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const bool row_ok = ((static_cast<std::size_t>(i) >> q) & 1u) == static_cast<unsigned>(bit);
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      const bool col_ok =
          ((static_cast<std::size_t>(j) >> q) & 1u) == static_cast<unsigned>(bit);
      if (!row_ok || !col_ok) out(i, j) = 0.0;
    }
  }
  return out;
}

}  // namespace

DensitySimulator::DensitySimulator(std::size_t n_qubits, std::size_t n_clbits)
    : DensitySimulator(DensityMatrix::zero_state(n_qubits), n_clbits) {}

DensitySimulator::DensitySimulator(const DensityMatrix& initial, std::size_t n_clbits)
    : n_qubits_(initial.num_qubits()), n_clbits_(n_clbits) {
  branches_.emplace(std::string(n_clbits, '0'), initial.matrix());
}

void DensitySimulator::apply(const Instruction& instr) {
  if (const auto* u = std::get_if<UnitaryOp>(&instr)) {
    check_targets(u->targets, n_qubits_, u->gate.arity());
    if (!qlab::is_unitary(u->gate.matrix)) {
      throw Error(ErrorCode::NonUnitary, "gate matrix is not unitary");
    }
    const ComplexMatrix e = embed_operator(u->gate.matrix, u->targets, n_qubits_);
    for (auto& [key, rho] : branches_) rho = e * rho * e.adjoint();
    return;
  }
  if (const auto* ch = std::get_if<ChannelOp>(&instr)) {
    check_targets(ch->targets, n_qubits_, ch->kraus.num_qubits());
    std::vector<ComplexMatrix> lifted;
    lifted.reserve(ch->kraus.operators().size());
    for (const auto& k : ch->kraus.operators()) {
      lifted.push_back(embed_operator(k, ch->targets, n_qubits_));
    }
    for (auto& [key, rho] : branches_) {
      ComplexMatrix acc = ComplexMatrix::Zero(rho.rows(), rho.cols());
      for (const auto& e : lifted) conjugate_into(acc, rho, e);
      rho = std::move(acc);
    }
    return;
  }
  if (const auto* r = std::get_if<ResetOp>(&instr)) {
    const Qubit q = r->target;
    const QubitList t{q};
    check_targets(t, n_qubits_);
    static const KrausSet kReset = reset_kraus();
    apply(ChannelOp{kReset, t, "reset"});
    return;
  }
  const auto& m = std::get<MeasureOp>(instr);
  const QubitList t{m.target};
  check_targets(t, n_qubits_);
  if (m.clbit >= n_clbits_) throw Error(ErrorCode::BadClbit, "clbit out of range");
  std::map<std::string, ComplexMatrix> next;
  for (const auto& [key, rho] : branches_) {
    for (int bit = 0; bit < 2; ++bit) {
      ComplexMatrix part = project(rho, m.target, bit);
      const double p = part.trace().real();
      if (p <= kPruneProbability) continue;
      std::string k2 = key;
      k2[m.clbit] = static_cast<char>('0' + bit);
      auto [it, inserted] = next.emplace(k2, part);
      if (!inserted) it->second += part;
    }
  }
  branches_ = std::move(next);
}

void DensitySimulator::run(const Circuit& c) {
  if (c.n_qubits() != n_qubits_ || c.n_clbits() != n_clbits_) {
    throw Error(ErrorCode::DimensionMismatch, "circuit shape differs from simulator");
  }
  ensure_valid(c);
  for (const auto& instr : c.instructions()) apply(instr);
}

DensityMatrix DensitySimulator::state() const {
  const auto dim = Eigen::Index{1} << n_qubits_;
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (const auto& [key, rho] : branches_) sum += rho;
  const double tr = sum.trace().real();
  return DensityMatrix::assume_valid(sum / tr);
}

Distribution DensitySimulator::distribution() const {
  Distribution d;
  double total = 0.0;
  for (const auto& [key, rho] : branches_) {
    const double p = std::max(rho.trace().real(), 0.0);
    if (p <= kPruneProbability) continue;
    d[key] = p;
    total += p;
  }
  for (auto& [key, p] : d) p /= total;
  return d;
}

RunResult DensitySimulator::result() const {
  DensityMatrix final_state = state();
  std::vector<DensityMatrix> reduced;
  reduced.reserve(n_qubits_);
  for (Qubit q = 0; q < n_qubits_; ++q) {
    const QubitList keep{q};
    reduced.push_back(partial_trace(final_state, keep));
  }
  return RunResult{distribution(), std::move(final_state), std::move(reduced)};
}

RunResult run_density(const Circuit& c) {
  return run_density(c, DensityMatrix::zero_state(c.n_qubits()));
}

RunResult run_density(const Circuit& c, const DensityMatrix& initial) {
  if (initial.num_qubits() != c.n_qubits()) {
    throw Error(ErrorCode::DimensionMismatch, "initial state width differs from circuit");
  }
  DensitySimulator sim(initial, c.n_clbits());
  sim.run(c);
  return sim.result();
}

// ---------------------------------------------------------------------------
// Distributions and sampling

Distribution measurement_distribution(const DensityMatrix& rho, std::span<const Qubit> qubits) {
  check_targets(qubits, rho.num_qubits());
  Distribution d;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    const double p = rho(i, i).real();
    if (p <= kPruneProbability) continue;
    std::string key(qubits.size(), '0');
    for (std::size_t k = 0; k < qubits.size(); ++k) {
      if ((i >> qubits[k]) & 1u) key[k] = '1';
    }
    d[key] += p;
  }
  const double total = probability_sum(d);
  for (auto& [key, p] : d) p /= total;
  return d;
}

Distribution marginal(const Distribution& dist, std::span<const std::size_t> positions) {
  Distribution out;
  for (const auto& [key, p] : dist) {
    std::string k2(positions.size(), '0');
    for (std::size_t k = 0; k < positions.size(); ++k) {
      if (positions[k] >= key.size()) throw Error(ErrorCode::BadClbit, "marginal position");
      k2[k] = key[positions[k]];
    }
    out[k2] += p;
  }
  return out;
}

double probability_sum(const Distribution& dist) {
  double s = 0.0;
  for (const auto& [key, p] : dist) s += p;
  return s;
}

Counts sample(const Distribution& dist, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw Error(ErrorCode::BadParams, "shots must be at least 1");
  if (dist.empty()) throw Error(ErrorCode::BadProbability, "empty distribution");
  std::vector<std::pair<std::string, double>> cdf;
  double acc = 0.0;
  for (const auto& [key, p] : dist) {
    if (!(p >= 0.0)) throw Error(ErrorCode::BadProbability, "negative probability for '" + key + "'");
    acc += p;
    cdf.emplace_back(key, acc);
  }
  if (std::abs(acc - 1.0) > 1e-9) throw Error(ErrorCode::BadProbability, "probabilities do not sum to 1");
  Counts counts;
  Pcg32 rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.next_double() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u,
                               [](double v, const auto& entry) { return v < entry.second; });
    if (it == cdf.end()) --it;
    ++counts[it->first];
  }
  return counts;
}

Counts sample(const RunResult& result, std::uint64_t shots, std::uint64_t seed) {
  return sample(result.distribution, shots, seed);
}

KrausSet depolarizing_kraus(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::BadProbability, "depolarizing probability must lie in [0, 1]");
  }
  const double a = std::sqrt(1.0 - 3.0 * p / 4.0);
  const double b = std::sqrt(p / 4.0);
  return KrausSet({a * pauli_matrix(Pauli::I), b * pauli_matrix(Pauli::X),
                   b * pauli_matrix(Pauli::Y), b * pauli_matrix(Pauli::Z)});
}

KrausSet reset_kraus() {
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k1(0, 1) = 1.0;
  return KrausSet({k0, k1});
}

KrausSet preparation_kraus(const DensityMatrix& sigma) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sigma.matrix());
  const auto d = static_cast<Eigen::Index>(sigma.dim());
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index v = 0; v < d; ++v) {
    const double lambda = es.eigenvalues()(v);
    if (lambda <= tol::kEntropyFloor) continue;
    for (Eigen::Index j = 0; j < d; ++j) {
      ComplexMatrix k = ComplexMatrix::Zero(d, d);
      k.col(j) = std::sqrt(lambda) * es.eigenvectors().col(v);
      ops.push_back(std::move(k));
    }
  }
  // Renormalize against clipped eigenvalues so the set stays trace preserving.
  double kept = 0.0;
  for (Eigen::Index v = 0; v < d; ++v) {
    if (es.eigenvalues()(v) > tol::kEntropyFloor) kept += es.eigenvalues()(v);
  }
  for (auto& k : ops) k /= std::sqrt(kept);
  return KrausSet(std::move(ops));
}

}  // namespace qlab
