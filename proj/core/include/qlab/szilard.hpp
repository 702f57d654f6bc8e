#pragma once

// Quantum Szilard engine: particle, demon memory and a two-qubit weight whose
// energy is the number of excited weight qubits.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "qlab/circuit.hpp"

namespace qlab::szilard {

inline constexpr Qubit kParticle = 0;
inline constexpr Qubit kMemory = 1;
inline constexpr Qubit kWeightHigh = 2;  // w1
inline constexpr Qubit kWeightLow = 3;   // w0
inline constexpr std::size_t kNumQubits = 4;

/// Instruction boundaries inside a cycle circuit: the state after the
/// first `k` instructions.
inline constexpr std::size_t kAfterMeasurement = 4;
inline constexpr std::size_t kAfterWeightLogic = 10;
inline constexpr std::size_t kAfterDecorrelation = 11;

struct SzilardConfig {
  std::size_t cycles = 1;
  bool skip_reset = false;
  double depolarize_p = 1.0;
  /// Seeded readouts of the weight per cycle; 0 disables sampling.
  std::uint64_t shots = 0;
};

struct CycleRecord {
  std::size_t cycle = 0;
  double expected_work = 0.0;
  std::optional<double> sampled_work_mean;
  std::map<int, std::uint64_t> sampled_work_counts;
  double memory_entropy_initial = 0.0;
  double memory_entropy_pre_reset = 0.0;
  double memory_entropy_post = 0.0;
  double mutual_info_after_measurement = 0.0;
  double mutual_info_after_decorrelation = 0.0;
  double erased_entropy = 0.0;
  DensityMatrix memory_in = DensityMatrix::zero_state(1);
  DensityMatrix memory_out = DensityMatrix::zero_state(1);
};

struct CycleLedger {
  SzilardConfig config;
  std::uint64_t seed = 0;
  std::vector<CycleRecord> records;
};

/// One engine cycle starting from |0> on all qubits. The memory is first
/// replaced by `memory_in`; the weight starts at |w1 w0> = |01>.
Circuit build_cycle(const DensityMatrix& memory_in, bool skip_reset, double depolarize_p = 1.0);

/// E(weight) - 1, i.e. energy gained relative to the prepared |01>.
double work_expectation(const DensityMatrix& weight_state);

/// S(A) + S(B) - S(AB) in bits, with A = `part_a` and B its complement.
double mutual_information(const DensityMatrix& joint, std::span<const Qubit> part_a);

CycleLedger run_cycles(const SzilardConfig& cfg, std::uint64_t seed = 0);

}  // namespace qlab::szilard
