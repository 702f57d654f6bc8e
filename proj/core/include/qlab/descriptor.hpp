#pragma once

// Heisenberg-picture descriptors.
//
// The descriptor of qubit q after t instructions is the triple
//   sigma_q,a(t) = U_{1..t}^dag sigma_a^(q) U_{1..t},  a in {x, y, z},
// where U_{1..t} = G_t ... G_1 is the circuit prefix. With this convention a
// gate supported on S leaves every descriptor of a qubit outside S unchanged,
// which is what locality_audit checks numerically.

#include <array>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qlab/circuit.hpp"

namespace qlab {

inline constexpr std::size_t kMaxDescriptorQubits = 6;
inline constexpr double kLocalityTolerance = 1e-10;
inline constexpr double kDependenceThreshold = 1e-9;

struct PauliTriple {
  ComplexMatrix x;
  ComplexMatrix y;
  ComplexMatrix z;

  const ComplexMatrix& operator[](Pauli axis) const;
};

class DescriptorFrame {
 public:
  std::size_t num_qubits() const noexcept { return n_; }
  /// Number of instructions absorbed so far.
  std::size_t step() const noexcept { return t_; }
  const PauliTriple& triple(Qubit q) const { return triples_.at(q); }
  const ComplexMatrix& descriptor(Qubit q, Pauli axis) const { return triple(q)[axis]; }
  const ComplexMatrix& prefix_unitary() const noexcept { return prefix_; }

 private:
  friend DescriptorFrame init_frame(std::size_t n);
  friend DescriptorFrame advance(const DescriptorFrame& f, const Instruction& instr);

  std::size_t n_ = 0;
  std::size_t t_ = 0;
  ComplexMatrix prefix_;
  std::vector<PauliTriple> triples_;
};

/// Bare embedded Paulis; 1 <= n <= 6 (TooManyQubits above, BadParams at 0).
DescriptorFrame init_frame(std::size_t n);
/// Absorbs one unitary instruction; NonUnitaryInstruction otherwise.
DescriptorFrame advance(const DescriptorFrame& f, const Instruction& instr);
DescriptorFrame evolve_frame(const Circuit& c);

/// Largest entry-wise change between two triples.
double triple_delta(const PauliTriple& a, const PauliTriple& b);

struct AuditStep {
  std::size_t instruction;
  double max_offsupport_delta;
  bool pass;
};

struct LocalityReport {
  std::vector<AuditStep> steps;
  bool overall = true;
};

LocalityReport locality_audit(const Circuit& c);
/// {"steps": [{"instr", "max_offsupport_delta", "pass"}], "overall": bool}
nlohmann::json to_json(const LocalityReport& report);

/// Builds a circuit from a parameter vector. Both probe evaluations must
/// give circuits of the same shape.
using ParamCircuitBuilder = std::function<Circuit(std::span<const double>)>;

struct DependenceResult {
  bool depends = false;
  double max_delta = 0.0;
};

/// Evaluates the builder at base_params with params[param] set to each of
/// `values` and compares the final descriptor triple of `qubit`.
DependenceResult dependence_probe(const ParamCircuitBuilder& builder,
                                  std::span<const double> base_params, std::size_t param,
                                  std::array<double, 2> values, Qubit qubit);

/// Per-qubit axis choice; element q applies to qubit q.
using PauliProduct = std::vector<Pauli>;
/// "ZIX" -> qubit 0: Z, qubit 1: I, qubit 2: X.
PauliProduct parse_pauli_product(std::string_view text);

/// <initial| prod_q sigma_q,axis(t) |initial>.
double expectation(const DescriptorFrame& f, const PauliProduct& observable,
                   const StateVector& initial);

/// 1/2 (I + sum_a <sigma_q,a(t)> sigma_a).
DensityMatrix reconstruct_marginal(const DescriptorFrame& f, Qubit q, const StateVector& initial);

}  // namespace qlab
