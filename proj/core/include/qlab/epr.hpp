#pragma once

// EPR parity-check experiment: a Bell pair shared by Alice and Bob, one
// X-rotation each, and a check qubit recording whether their outcomes agree.

#include <span>
#include <vector>

#include "qlab/circuit.hpp"

namespace qlab::epr {

inline constexpr Qubit kAlice = 0;
inline constexpr Qubit kBob = 1;
inline constexpr Qubit kAliceMemory = 2;
inline constexpr Qubit kBobMemory = 3;
inline constexpr Qubit kCheck = 4;
inline constexpr std::size_t kNumQubits = 5;

inline constexpr std::size_t kCheckClbit = 0;
inline constexpr std::size_t kAliceClbit = 1;
inline constexpr std::size_t kBobClbit = 2;
inline constexpr std::size_t kNumClbits = 3;

struct EprConfig {
  double theta = 0.0;
  double phi = 0.0;
  /// true: measurements are CNOTs into memory qubits (all-unitary until the
  /// final readout). false: Alice and Bob are measured before the parity.
  bool deferred = true;
  /// Adds H on both parties after their rotations (X-basis readout).
  bool x_basis = false;
};

enum class Stage {
  AfterRotations,
  AfterMemories,  // truncated before the parity CNOTs
  Full,
};

/// Complete circuit including the classical readout.
Circuit build_epr_circuit(const EprConfig& cfg);
/// Unitary-only deferred form up to `stage`; input for the descriptor engine.
Circuit build_epr_unitary(const EprConfig& cfg, Stage stage = Stage::Full);

/// Exact P(check = 1) from the density backend.
double check_distribution(const EprConfig& cfg);

struct SweepRow {
  double theta;
  double phi;
  double p_check_one;
};

/// `steps` evenly spaced angles over [-pi, pi]; a single step gives {0}.
std::vector<double> angle_grid(std::size_t steps);
std::vector<SweepRow> sweep(std::span<const double> theta_grid, std::span<const double> phi_grid,
                            bool deferred = true);

struct ParamDependence {
  bool on_theta = false;
  bool on_phi = false;
  double delta_theta = 0.0;
  double delta_phi = 0.0;
};

struct EprReport {
  EprConfig config;
  double p_check_one = 0.0;
  double correlation = 0.0;
  ParamDependence alice_memory;  // before the parity CNOTs
  ParamDependence bob_memory;    // before the parity CNOTs
  ParamDependence check;         // after the parity CNOTs
};

/// Requires cfg.deferred.
EprReport info_flow_report(const EprConfig& cfg);

/// Reduced state of one qubit right after both rotations.
DensityMatrix local_marginal(const EprConfig& cfg, Qubit q);

}  // namespace qlab::epr
