#include "qlab/szilard.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qlab/rng.hpp"

namespace qlab::szilard {

Circuit build_cycle(const DensityMatrix& memory_in, bool skip_reset, double depolarize_p) {
  if (memory_in.num_qubits() != 1) {
    throw Error(ErrorCode::BadMemoryState, "memory state must be a single qubit");
  }
  const KrausSet depolarize = depolarizing_kraus(depolarize_p);
  Circuit c(kNumQubits, 0);
  c.channel(preparation_kraus(memory_in), {kMemory}, "memory-in");
  c.channel(depolarize, {kParticle}, "thermalize");
  c.x(kWeightLow);
  c.cx(kParticle, kMemory);  // demon measures the particle

  // Weight logic: lift |01> -> |11> when particle and memory agree, lower
  // |01> -> |00> when they disagree. The memory temporarily holds the parity.
  c.cx(kParticle, kMemory);
  c.x(kMemory);
  c.cx(kMemory, kWeightHigh);
  c.x(kMemory);
  c.cx(kMemory, kWeightLow);
  c.cx(kParticle, kMemory);

  c.channel(depolarize, {kParticle}, "decorrelate");
  if (!skip_reset) c.reset(kMemory);
  return c;
}

double work_expectation(const DensityMatrix& weight_state) {
  if (weight_state.num_qubits() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "weight state must span two qubits");
  }
  constexpr double kEnergy[] = {0.0, 1.0, 1.0, 2.0};
  double e = 0.0;
  for (std::size_t i = 0; i < 4; ++i) e += kEnergy[i] * weight_state(i, i).real();
  return e - 1.0;
}

double mutual_information(const DensityMatrix& joint, std::span<const Qubit> part_a) {
  const std::size_t n = joint.num_qubits();
  std::set<Qubit> a(part_a.begin(), part_a.end());
  if (a.empty() || a.size() != part_a.size() || a.size() >= n || *a.rbegin() >= n) {
    throw Error(ErrorCode::BadPartition, "part A must be a proper nonempty subset of the qubits");
  }
  QubitList qa(a.begin(), a.end());
  QubitList qb;
  for (Qubit q = 0; q < n; ++q) {
    if (!a.count(q)) qb.push_back(q);
  }
  const double mi = vn_entropy_bits(partial_trace(joint, qa)) +
                    vn_entropy_bits(partial_trace(joint, qb)) - vn_entropy_bits(joint);
  return std::max(mi, 0.0);
}

namespace {

DensityMatrix reduced(const DensityMatrix& rho, std::initializer_list<Qubit> keep) {
  const QubitList k(keep);
  return partial_trace(rho, k);
}

}  // namespace

CycleLedger run_cycles(const SzilardConfig& cfg, std::uint64_t seed) {
  if (cfg.cycles == 0) throw Error(ErrorCode::BadParams, "at least one cycle is required");
  CycleLedger ledger{cfg, seed, {}};
  DensityMatrix memory = DensityMatrix::zero_state(1);
  for (std::size_t cycle = 1; cycle <= cfg.cycles; ++cycle) {
    const Circuit c = build_cycle(memory, cfg.skip_reset, cfg.depolarize_p);
    DensitySimulator sim(kNumQubits, 0);
    CycleRecord rec;
    rec.cycle = cycle;
    rec.memory_in = memory;
    rec.memory_entropy_initial = vn_entropy_bits(memory);
    for (std::size_t k = 0; k < c.size(); ++k) {
      sim.apply(c.instructions()[k]);
      if (k + 1 == kAfterMeasurement) {
        rec.mutual_info_after_measurement =
            mutual_information(reduced(sim.state(), {kParticle, kMemory}), QubitList{0});
      } else if (k + 1 == kAfterDecorrelation) {
        const DensityMatrix s = sim.state();
        rec.mutual_info_after_decorrelation =
            mutual_information(reduced(s, {kParticle, kMemory}), QubitList{0});
        rec.memory_entropy_pre_reset = vn_entropy_bits(reduced(s, {kMemory}));
      }
    }
    const DensityMatrix final_state = sim.state();
    const DensityMatrix weight = reduced(final_state, {kWeightHigh, kWeightLow});
    rec.expected_work = work_expectation(weight);
    rec.memory_out = reduced(final_state, {kMemory});
    rec.memory_entropy_post = vn_entropy_bits(rec.memory_out);
    rec.erased_entropy = rec.memory_entropy_pre_reset - rec.memory_entropy_post;

    if (cfg.shots > 0) {
      const QubitList readout{kWeightHigh, kWeightLow};
      const Distribution d = measurement_distribution(final_state, readout);
      const Counts counts = sample(d, cfg.shots, splitmix64(seed + cycle));
      double total = 0.0;
      for (const auto& [bits, n] : counts) {
        const int work = (bits[0] - '0') + (bits[1] - '0') - 1;
        rec.sampled_work_counts[work] += n;
        total += static_cast<double>(work) * static_cast<double>(n);
      }
      rec.sampled_work_mean = total / static_cast<double>(cfg.shots);
    }
    memory = rec.memory_out;
    ledger.records.push_back(std::move(rec));
  }
  return ledger;
}

}  // namespace qlab::szilard
