#pragma once

// Deutsch closed-timelike-curve simulation.
//
// A problem couples n_sys chronology-respecting qubits to n_loop qubits that
// travel around the time loop. The system occupies the low-order qubits
// 0..n_sys-1 and the loop the qubits above it, so the joint input state is
// rho_loop (x) rho_sys. The loop state must satisfy
//   rho_loop = tr_sys( U (rho_loop (x) rho_sys) U^dag ).

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "qlab/circuit.hpp"

namespace qlab::ctc {

struct CtcProblem {
  ComplexMatrix u;
  DensityMatrix system_state;
  std::size_t n_sys = 0;
  std::size_t n_loop = 0;
};

/// Validates unitarity (tol::kUnitarity) and dimensions. A zero-qubit
/// system is given as DensityMatrix::zero_state(0).
CtcProblem make_problem(ComplexMatrix u, DensityMatrix system_state, std::size_t n_loop);

enum class Method { Iteration, Eigensolve };
std::string_view to_string(Method m) noexcept;

struct FixedPointSolution {
  DensityMatrix rho_loop = DensityMatrix::zero_state(0);
  double residual = 0.0;
  std::size_t iterations = 0;
  Method method = Method::Iteration;
  /// Number of superoperator eigenvalues equal to 1 (within 1e-8).
  std::size_t multiplicity_hint = 0;
  double entropy_bits = 0.0;
};

inline constexpr double kDefaultTolerance = 1e-12;
inline constexpr std::size_t kDefaultMaxIterations = 10000;

DensityMatrix consistency_map(const CtcProblem& p, const DensityMatrix& rho_loop);

/// Matrix of the (linear) consistency map acting on column-major vec(rho).
ComplexMatrix superoperator(const CtcProblem& p);

/// Iterates the map from I/2^n_loop while tracking the Cesaro average, with
/// an eigensolver fallback. When the fixed point is not unique the
/// maximum-entropy one is returned. Throws NoConvergence.
FixedPointSolution solve_fixed_point(const CtcProblem& p, double tol = kDefaultTolerance,
                                     std::size_t max_iter = kDefaultMaxIterations);

struct CtcRun {
  Distribution distribution;
  FixedPointSolution solution;
  DensityMatrix system_out = DensityMatrix::zero_state(0);
};

/// Solves the loop, runs rho* (x) rho_sys through U and measures the listed
/// system qubits exactly.
CtcRun run_ctc_circuit(const CtcProblem& p, std::span<const Qubit> measure,
                       double tol = kDefaultTolerance);

/// SWAP(sys, loop) followed by CH(sys -> loop), on (sys = qubit 0, loop = 1).
Circuit distinguisher_interaction();
ComplexMatrix distinguisher_unitary();

/// System (s = 0, ancilla a = 1), loop (m1 = 2, m0 = 3). The loop register
/// settles on the label of the input: |0>,|1>,|+>,|-> -> (m1, m0) =
/// 00, 10, 01, 11, which the swap hands to (s, a).
Circuit bb84_interaction();
ComplexMatrix bb84_unitary();

enum class Protocol { Single, Bb84 };
enum class Label { Zero, One, Plus, Minus };

std::string_view to_string(Protocol p) noexcept;
std::string_view to_string(Label l) noexcept;
/// Accepts 0, 1, +, - (and the Unicode minus sign). Throws BadLabel.
Label parse_label(std::string_view text);
Protocol parse_protocol(std::string_view text);

StateVector label_state(Label l);
/// Throws BadLabel for labels the protocol cannot take (single: 0 and -).
void check_label(Protocol p, Label l);

/// The discrimination problem for one input label. Any label is accepted;
/// the single distinguisher simply gives mixed outcomes for 1 and +.
CtcProblem protocol_problem(Protocol p, Label l);
/// System qubits read out by the protocol.
QubitList protocol_readout(Protocol p);

/// Circuit that prepares the system from the label and also prepares the
/// loop qubits in the consistent state chosen from the label, then runs the
/// interaction and measures. No solver involved.
Circuit classical_control_demo(Label l, Protocol p);

/// Trace distance between rho*(mixture of a and b) and the mixture of
/// rho*(a) and rho*(b), both with weight 1/2.
double nonlinearity_witness(const ComplexMatrix& u, std::size_t n_loop, const DensityMatrix& a,
                            const DensityMatrix& b);

}  // namespace qlab::ctc
