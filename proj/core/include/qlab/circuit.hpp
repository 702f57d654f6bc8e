#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qlab/qmath.hpp"

namespace qlab {

enum class GateKind { H, X, Y, Z, I, RX, CNOT, SWAP, CH, CCX };

std::string_view to_string(GateKind kind) noexcept;
/// Case-insensitive; accepts "CX" as an alias for CNOT. Throws UnknownKind.
GateKind gate_kind_from_string(std::string_view name);
std::size_t gate_arity(GateKind kind) noexcept;

/// Multi-qubit gates use targets[k] <-> local bit k: CNOT/CH are
/// (control, target), CCX is (control, control, target).
struct Gate {
  GateKind kind;
  double theta = 0.0;
  ComplexMatrix matrix;

  std::size_t arity() const noexcept { return gate_arity(kind); }
};

/// Only RX takes a parameter (theta, radians). Throws BadParams otherwise.
Gate make_gate(GateKind kind, std::span<const double> params = {});
Gate make_gate(std::string_view kind, std::span<const double> params = {});

struct UnitaryOp {
  Gate gate;
  QubitList targets;
};

struct ChannelOp {
  KrausSet kraus;
  QubitList targets;
  std::string label;
};

struct ResetOp {
  Qubit target;
};

struct MeasureOp {
  Qubit target;
  std::size_t clbit;
};

using Instruction = std::variant<UnitaryOp, ChannelOp, ResetOp, MeasureOp>;

QubitList support(const Instruction& instr);
bool is_unitary(const Instruction& instr) noexcept;

class Circuit {
 public:
  explicit Circuit(std::size_t n_qubits, std::size_t n_clbits = 0);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t n_clbits() const noexcept { return n_clbits_; }
  const std::vector<Instruction>& instructions() const noexcept { return instrs_; }
  std::size_t size() const noexcept { return instrs_.size(); }
  bool unitary_only() const noexcept;

  Circuit& append(Instruction instr);
  Circuit& gate(GateKind kind, QubitList targets, std::span<const double> params = {});

  Circuit& i(Qubit q) { return gate(GateKind::I, {q}); }
  Circuit& h(Qubit q) { return gate(GateKind::H, {q}); }
  Circuit& x(Qubit q) { return gate(GateKind::X, {q}); }
  Circuit& y(Qubit q) { return gate(GateKind::Y, {q}); }
  Circuit& z(Qubit q) { return gate(GateKind::Z, {q}); }
  Circuit& rx(double theta, Qubit q);
  Circuit& cx(Qubit control, Qubit target) { return gate(GateKind::CNOT, {control, target}); }
  Circuit& swap(Qubit a, Qubit b) { return gate(GateKind::SWAP, {a, b}); }
  Circuit& ch(Qubit control, Qubit target) { return gate(GateKind::CH, {control, target}); }
  Circuit& ccx(Qubit c0, Qubit c1, Qubit target) { return gate(GateKind::CCX, {c0, c1, target}); }
  Circuit& channel(KrausSet kraus, QubitList targets, std::string label = {});
  Circuit& reset(Qubit q);
  Circuit& measure(Qubit q, std::size_t clbit);

  /// Product of all gates, G_last ... G_first. Unitary-only circuits.
  ComplexMatrix unitary() const;

 private:
  std::size_t n_qubits_;
  std::size_t n_clbits_;
  std::vector<Instruction> instrs_;
};

struct Violation {
  std::size_t instruction;
  ErrorCode code;
  std::string message;
};

/// Collects every violation instead of stopping at the first one.
std::vector<Violation> validate(const Circuit& c);
/// Throws the first violation reported by validate().
void ensure_valid(const Circuit& c);

/// Bitstring -> probability; character k of a key is classical bit k.
using Distribution = std::map<std::string, double>;
using Counts = std::map<std::string, std::uint64_t>;

struct RunResult {
  Distribution distribution;
  DensityMatrix final_state;
  std::vector<DensityMatrix> reduced_states;
};

inline constexpr double kPruneProbability = 1e-14;

StateVector run_statevector(const Circuit& c);
StateVector run_statevector(const Circuit& c, const StateVector& initial);

RunResult run_density(const Circuit& c);
RunResult run_density(const Circuit& c, const DensityMatrix& initial);

/// Exact density-matrix execution one instruction at a time. Measurements
/// split the state into classical branches (unnormalized), so the joint
/// distribution is exact and no sampling happens here.
class DensitySimulator {
 public:
  DensitySimulator(std::size_t n_qubits, std::size_t n_clbits);
  DensitySimulator(const DensityMatrix& initial, std::size_t n_clbits);

  void apply(const Instruction& instr);
  void run(const Circuit& c);

  /// Ensemble average over classical branches.
  DensityMatrix state() const;
  Distribution distribution() const;
  RunResult result() const;

 private:
  std::size_t n_qubits_;
  std::size_t n_clbits_;
  std::map<std::string, ComplexMatrix> branches_;
};

/// Exact Z-basis outcome distribution of `qubits` (key char k = qubits[k]).
Distribution measurement_distribution(const DensityMatrix& rho, std::span<const Qubit> qubits);
Distribution marginal(const Distribution& dist, std::span<const std::size_t> positions);
double probability_sum(const Distribution& dist);

/// Multinomial draw of `shots` outcomes; identical inputs give identical
/// counts on every platform.
Counts sample(const Distribution& dist, std::uint64_t shots, std::uint64_t seed);
Counts sample(const RunResult& result, std::uint64_t shots, std::uint64_t seed);

/// {sqrt(1-3p/4) I, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z}. Throws BadProbability.
KrausSet depolarizing_kraus(double p);
/// {|0><0|, |0><1|}.
KrausSet reset_kraus();
/// Replacement channel rho -> tr(rho) sigma for a one-or-more qubit sigma.
KrausSet preparation_kraus(const DensityMatrix& sigma);

}  // namespace qlab
