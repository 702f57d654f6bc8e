#include <gtest/gtest.h>

#include <cmath>

#include "../support/expect.hpp"
#include "../support/oracle.hpp"
#include "qlab/szilard.hpp"

using namespace qlab;
using namespace qlab::szilard;

namespace {

DensityMatrix basis_state(std::size_t n, std::size_t index) {
  return DensityMatrix::pure(StateVector::basis(n, index));
}

// Runs the weight logic (instructions after the measurement up to the
// decorrelation) from a definite particle / memory / weight configuration.
DensityMatrix weight_after_logic(int particle, int memory) {
  const Circuit cycle = build_cycle(DensityMatrix::zero_state(1), true);
  Circuit logic(kNumQubits);
  for (std::size_t k = kAfterMeasurement; k < kAfterWeightLogic; ++k) logic.append(cycle.instructions()[k]);
  std::size_t index = (static_cast<std::size_t>(particle) << kParticle) |
                      (static_cast<std::size_t>(memory) << kMemory) | (std::size_t{1} << kWeightLow);
  const DensityMatrix out = run_density(logic, basis_state(kNumQubits, index)).final_state;
  const QubitList weight{kWeightLow, kWeightHigh};
  return partial_trace(out, weight);
}

}  // namespace

TEST(build_cycle, weight_truth_table) {
  // Weight register (w0 low bit, w1 high bit): |01> has w0 = 1, |11> = index 3, |00> = index 0.
  for (int bit : {0, 1}) {
    EXPECT_LT(max_abs_diff(weight_after_logic(bit, bit).matrix(), basis_state(2, 3).matrix()), 1e-15);
    EXPECT_LT(max_abs_diff(weight_after_logic(bit, 1 - bit).matrix(), basis_state(2, 0).matrix()), 1e-15);
  }
}

TEST(build_cycle, reset_returns_memory_to_zero) {
  const RunResult r = run_density(build_cycle(DensityMatrix::maximally_mixed(1), false));
  const QubitList mem{kMemory};
  EXPECT_LT(trace_distance(partial_trace(r.final_state, mem), DensityMatrix::zero_state(1)), 1e-12);
  expect_error(ErrorCode::BadMemoryState, [] { (void)build_cycle(DensityMatrix::zero_state(2), false); });
}

TEST(work_expectation, examples) {
  EXPECT_NEAR(work_expectation(basis_state(2, 3)), 1.0, 1e-15);
  EXPECT_NEAR(work_expectation(basis_state(2, 0)), -1.0, 1e-15);
  const ComplexMatrix mix = 0.5 * (basis_state(2, 3).matrix() + basis_state(2, 0).matrix());
  EXPECT_NEAR(work_expectation(DensityMatrix::from_matrix(mix)), 0.0, 1e-15);
  expect_error(ErrorCode::DimensionMismatch, [] { (void)work_expectation(DensityMatrix::zero_state(1)); });
}

TEST(mutual_information, examples) {
  const QubitList a{0};
  const ComplexMatrix classical = 0.5 * (basis_state(2, 0).matrix() + basis_state(2, 3).matrix());
  EXPECT_NEAR(mutual_information(DensityMatrix::from_matrix(classical), a), 1.0, 1e-12);
  EXPECT_NEAR(mutual_information(DensityMatrix::from_matrix(oracle::kron(oracle::plus(), oracle::ket1())), a), 0.0,
              1e-12);
  const oracle::Vec bell = (oracle::basis(2, 0) + oracle::basis(2, 3)) / std::sqrt(2.0);
  EXPECT_NEAR(mutual_information(DensityMatrix::from_matrix(oracle::projector(bell)), a), 2.0, 1e-12);
  const QubitList everything{0, 1};
  expect_error(ErrorCode::BadPartition,
               [&] { (void)mutual_information(DensityMatrix::zero_state(2), everything); });
  const QubitList nothing{};
  expect_error(ErrorCode::BadPartition, [&] { (void)mutual_information(DensityMatrix::zero_state(2), nothing); });
}

TEST(run_cycles, with_erasure_every_cycle_is_a_true_cycle) {
  SzilardConfig cfg;
  cfg.cycles = 5;
  const CycleLedger ledger = run_cycles(cfg);
  ASSERT_EQ(ledger.records.size(), 5u);
  for (const auto& r : ledger.records) {
    EXPECT_NEAR(r.expected_work, 1.0, 1e-9);
    EXPECT_LE(trace_distance(r.memory_out, r.memory_in), 1e-10);
    EXPECT_LE(trace_distance(r.memory_out, DensityMatrix::zero_state(1)), 1e-10);
    EXPECT_NEAR(r.mutual_info_after_measurement, 1.0, 1e-9);
    EXPECT_NEAR(r.mutual_info_after_decorrelation, 0.0, 1e-9);
    EXPECT_NEAR(r.memory_entropy_pre_reset, 1.0, 1e-9);
    EXPECT_NEAR(r.erased_entropy, 1.0, 1e-9);
  }
}

TEST(run_cycles, without_erasure_the_full_memory_is_useless) {
  SzilardConfig cfg;
  cfg.cycles = 5;
  cfg.skip_reset = true;
  const CycleLedger ledger = run_cycles(cfg);
  ASSERT_EQ(ledger.records.size(), 5u);
  EXPECT_NEAR(ledger.records[0].expected_work, 1.0, 1e-9);
  for (std::size_t k = 1; k < 5; ++k) {
    EXPECT_NEAR(ledger.records[k].expected_work, 0.0, 1e-9);
    EXPECT_NEAR(ledger.records[k].memory_entropy_initial, 1.0, 1e-9);
    EXPECT_NEAR(ledger.records[k].mutual_info_after_measurement, 0.0, 1e-9);
  }
  EXPECT_NEAR(ledger.records[1].memory_entropy_initial, 1.0, 1e-9);
}

TEST(run_cycles, erasing_a_full_memory_removes_one_bit) {
  SzilardConfig skip;
  skip.skip_reset = true;
  const CycleLedger first = run_cycles(skip);
  const DensityMatrix full = first.records[0].memory_out;
  EXPECT_NEAR(vn_entropy_bits(full), 1.0, 1e-9);

  const RunResult r = run_density(build_cycle(full, false));
  const QubitList mem{kMemory};
  const DensityMatrix after = partial_trace(r.final_state, mem);
  EXPECT_NEAR(vn_entropy_bits(full) - vn_entropy_bits(after), 1.0, 1e-9);
}

TEST(run_cycles, sampling_is_seeded_and_unbiased) {
  SzilardConfig cfg;
  cfg.cycles = 2;
  cfg.skip_reset = true;
  cfg.shots = 10000;
  const CycleLedger a = run_cycles(cfg, 7);
  const CycleLedger b = run_cycles(cfg, 7);
  ASSERT_TRUE(a.records[1].sampled_work_mean.has_value());
  EXPECT_EQ(a.records[1].sampled_work_counts, b.records[1].sampled_work_counts);
  EXPECT_NEAR(*a.records[1].sampled_work_mean, 0.0, 0.03);
  EXPECT_NEAR(*a.records[0].sampled_work_mean, 1.0, 1e-12);
  std::uint64_t total = 0;
  for (const auto& [work, n] : a.records[1].sampled_work_counts) total += n;
  EXPECT_EQ(total, 10000u);
  EXPECT_FALSE(run_cycles(SzilardConfig{}).records[0].sampled_work_mean.has_value());
}
