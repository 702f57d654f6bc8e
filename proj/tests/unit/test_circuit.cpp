#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "../support/bridge.hpp"
#include "../support/expect.hpp"
#include "../support/oracle.hpp"
#include "qlab/circuit.hpp"
#include "qlab/circuit_io.hpp"
#include "qlab/epr.hpp"

using namespace qlab;

TEST(make_gate, examples) {
  const double zero[] = {0.0};
  EXPECT_LT(max_abs_diff(make_gate(GateKind::RX, zero).matrix, ComplexMatrix::Identity(2, 2)), 1e-15);
  const double pi[] = {oracle::kPi};
  EXPECT_LT(max_abs_diff(make_gate(GateKind::RX, pi).matrix, Complex(0, -1) * oracle::X()), 1e-12);
  const ComplexMatrix h = make_gate(GateKind::H).matrix;
  EXPECT_LT(max_abs_diff(h * h, ComplexMatrix::Identity(2, 2)), 1e-15);
}

TEST(make_gate, matrices_match_oracle) {
  for (const char* name : {"H", "X", "Y", "Z", "I", "CNOT", "SWAP", "CH", "CCX"}) {
    EXPECT_LT(max_abs_diff(make_gate(name).matrix, oracle::gate_by_name(name)), 1e-15) << name;
  }
  const double t[] = {0.37};
  EXPECT_LT(max_abs_diff(make_gate("rx", t).matrix, oracle::RX(0.37)), 1e-15);
  EXPECT_EQ(gate_kind_from_string("cx"), GateKind::CNOT);
  EXPECT_EQ(gate_kind_from_string("Toffoli"), GateKind::CCX);
}

TEST(make_gate, errors) {
  expect_error(ErrorCode::UnknownKind, [] { (void)make_gate("T"); });
  expect_error(ErrorCode::BadParams, [] { (void)make_gate(GateKind::RX); });
  const double extra[] = {0.1};
  expect_error(ErrorCode::BadParams, [&] { (void)make_gate(GateKind::H, extra); });
}

TEST(validate, examples) {
  EXPECT_TRUE(validate(Circuit(2)).empty());

  Circuit same(2);
  same.append(UnitaryOp{make_gate(GateKind::CNOT), {0, 0}});
  auto v = validate(same);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].code, ErrorCode::BadTargets);

  Circuit clbit(2, 2);
  clbit.append(MeasureOp{0, 3});
  v = validate(clbit);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].code, ErrorCode::BadClbit);

  Circuit twice(2, 1);
  twice.append(MeasureOp{0, 0});
  twice.append(MeasureOp{1, 0});
  v = validate(twice);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].code, ErrorCode::ClbitConflict);
  expect_error(ErrorCode::ClbitConflict, [&] { ensure_valid(twice); });
}

TEST(run_statevector, examples) {
  Circuit h(1);
  h.h(0);
  const StateVector psi = run_statevector(h);
  EXPECT_NEAR(std::abs(psi[0] - 1 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(psi[1] - 1 / std::sqrt(2.0)), 0.0, 1e-15);

  Circuit bell(2);
  bell.h(0).cx(0, 1);
  const StateVector b = run_statevector(bell);
  EXPECT_NEAR(std::abs(b[0] - 1 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b[3] - 1 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b[1]) + std::abs(b[2]), 0.0, 1e-15);

  Circuit m(1, 1);
  m.measure(0, 0);
  expect_error(ErrorCode::NonUnitaryInstruction, [&] { (void)run_statevector(m); });
}

TEST(run_statevector, epr_all_unitary_form_leaves_check_in_zero) {
  const Circuit c = epr::build_epr_unitary({0.0, 0.0, true, false});
  const StateVector psi = run_statevector(c);
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    if ((i >> epr::kCheck) & 1u) EXPECT_NEAR(std::abs(psi[i]), 0.0, 1e-15);
  }
  // Oracle: same gates, brute-force unitary.
  const std::vector<oracle::GateSpec> gates = {
      {"H", {0}}, {"CNOT", {0, 1}}, {"RX", {0}, 0.0}, {"RX", {1}, 0.0},
      {"CNOT", {0, 2}}, {"CNOT", {1, 3}}, {"CNOT", {2, 4}}, {"CNOT", {3, 4}}};
  const oracle::Vec expected = oracle::circuit_unitary(gates, 5) * oracle::basis(5, 0);
  EXPECT_LT((psi.amplitudes() - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(run_density, examples) {
  Circuit plus(1, 1);
  plus.h(0).measure(0, 0);
  const Distribution d = run_density(plus).distribution;
  EXPECT_NEAR(d.at("0"), 0.5, 1e-15);
  EXPECT_NEAR(d.at("1"), 0.5, 1e-15);

  epr::EprConfig cfg;
  cfg.deferred = false;
  const Distribution fig1 = run_density(epr::build_epr_circuit(cfg)).distribution;
  double p_check_one = 0.0;
  for (const auto& [key, p] : fig1) p_check_one += key[epr::kCheckClbit] == '1' ? p : 0.0;
  EXPECT_EQ(p_check_one, 0.0);

  Circuit reset(1);
  reset.reset(0);
  const RunResult r = run_density(reset, DensityMatrix::maximally_mixed(1));
  EXPECT_LT(max_abs_diff(r.final_state.matrix(), oracle::ket0()), 1e-15);
}

TEST(run_density, reset_is_idempotent) {
  std::mt19937_64 rng(29);
  for (int rep = 0; rep < 10; ++rep) {
    const DensityMatrix rho = DensityMatrix::from_matrix(oracle::random_density(rng, 3));
    Circuit once(3), twice(3);
    once.reset(1);
    twice.reset(1).reset(1);
    EXPECT_LT(max_abs_diff(run_density(once, rho).final_state.matrix(),
                           run_density(twice, rho).final_state.matrix()),
              1e-12);
  }
}

TEST(run_density, backends_agree_on_random_circuits) {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 1 + rng() % 5;
    const auto gates = oracle::random_gates(rng, n, 20);
    Circuit c = bridge::to_circuit(gates, n, n);
    const StateVector psi = run_statevector(c);
    const oracle::Vec expected = oracle::circuit_unitary(gates, n) * oracle::basis(n, 0);
    ASSERT_LT((psi.amplitudes() - expected).cwiseAbs().maxCoeff(), 1e-12);

    for (Qubit q = 0; q < n; ++q) c.measure(q, q);
    const RunResult r = run_density(c);
    EXPECT_NEAR(probability_sum(r.distribution), 1.0, 1e-9);
    for (std::size_t i = 0; i < psi.dim(); ++i) {
      std::string key;
      for (Qubit q = 0; q < n; ++q) key += ((i >> q) & 1u) ? '1' : '0';
      const double p = std::norm(expected(static_cast<Eigen::Index>(i)));
      const auto it = r.distribution.find(key);
      EXPECT_NEAR(it == r.distribution.end() ? 0.0 : it->second, p, 1e-9);
    }
  }
}

TEST(run_density, mid_circuit_measurement_dephases) {
  // H, measure, H: the measurement destroys the interference.
  Circuit c(1, 1);
  c.h(0).measure(0, 0).h(0);
  const RunResult r = run_density(c);
  EXPECT_LT(max_abs_diff(r.final_state.matrix(), oracle::I2() / 2.0), 1e-15);
  EXPECT_NEAR(r.distribution.at("0"), 0.5, 1e-15);
}

TEST(run_density, channels_and_oracle) {
  Circuit c(2, 0);
  c.h(0).cx(0, 1).channel(depolarizing_kraus(0.3), {1}, "noise");
  const RunResult r = run_density(c);
  oracle::Mat bell = oracle::projector((oracle::basis(2, 0) + oracle::basis(2, 3)) / std::sqrt(2.0));
  oracle::Mat expected = 0.7 * bell;
  for (const auto& p : {oracle::I2(), oracle::X(), oracle::Y(), oracle::Z()}) {
    const oracle::Mat full = oracle::embed(p, {1}, 2);
    expected += 0.3 / 4.0 * full * bell * full.adjoint();
  }
  EXPECT_LT(max_abs_diff(r.final_state.matrix(), expected), 1e-14);
}

TEST(depolarizing, examples) {
  std::mt19937_64 rng(37);
  const QubitList q0{0};
  const oracle::Mat rho = oracle::random_density(rng, 1);
  EXPECT_LT(max_abs_diff(apply_kraus(DensityMatrix::from_matrix(rho), depolarizing_kraus(0.0), q0).matrix(), rho),
            1e-15);
  EXPECT_LT(max_abs_diff(apply_kraus(DensityMatrix::zero_state(1), depolarizing_kraus(1.0), q0).matrix(),
                         oracle::I2() / 2.0),
            1e-15);
  for (int rep = 0; rep < 5; ++rep) {
    const DensityMatrix pure = DensityMatrix::from_matrix(oracle::projector(oracle::random_state(rng, 1)));
    EXPECT_LT(max_abs_diff(apply_kraus(pure, depolarizing_kraus(1.0), q0).matrix(), oracle::I2() / 2.0), 1e-14);
  }
  expect_error(ErrorCode::BadProbability, [] { (void)depolarizing_kraus(1.5); });
  expect_error(ErrorCode::BadProbability, [] { (void)depolarizing_kraus(-0.1); });
}

TEST(sample, examples) {
  const Counts sure = sample(Distribution{{"0", 1.0}}, 100, 0);
  EXPECT_EQ(sure.at("0"), 100u);
  EXPECT_EQ(sure.size(), 1u);

  const Distribution fair{{"0", 0.5}, {"1", 0.5}};
  const Counts a = sample(fair, 10000, 42);
  EXPECT_NEAR(static_cast<double>(a.at("0")), 5000.0, 150.0);
  EXPECT_NEAR(static_cast<double>(a.at("1")), 5000.0, 150.0);
  EXPECT_EQ(a, sample(fair, 10000, 42));
  EXPECT_NE(a, sample(fair, 10000, 43));
}

TEST(sample, rejects_bad_distributions) {
  expect_error(ErrorCode::BadProbability, [] { (void)sample(Distribution{{"0", 0.7}}, 10, 0); });
  expect_error(ErrorCode::BadProbability,
               [] { (void)sample(Distribution{{"0", 1.2}, {"1", -0.2}}, 10, 0); });
}

TEST(marginal, sums_out_positions) {
  const Distribution d{{"00", 0.25}, {"01", 0.25}, {"11", 0.5}};
  const std::size_t first[] = {0};
  const Distribution m = marginal(d, first);
  EXPECT_NEAR(m.at("0"), 0.5, 1e-15);
  EXPECT_NEAR(m.at("1"), 0.5, 1e-15);
}

TEST(circuit_io, round_trip) {
  Circuit c(3, 2);
  c.h(0).rx(0.25, 1).ccx(0, 1, 2).channel(depolarizing_kraus(0.5), {2}, "depol").reset(1).measure(0, 0).measure(2, 1);
  const Circuit back = circuit_from_json(circuit_to_json(c));
  ASSERT_EQ(back.size(), c.size());
  EXPECT_EQ(circuit_to_json(back), circuit_to_json(c));
  const RunResult a = run_density(c);
  const RunResult b = run_density(back);
  EXPECT_LT(max_abs_diff(a.final_state.matrix(), b.final_state.matrix()), 1e-15);

  const auto j = nlohmann::json::parse(R"({"n_qubits": 2, "instructions": [
      {"op": "unitary", "kind": "H", "targets": [0]},
      {"op": "unitary", "kind": "CX", "targets": [0, 1]},
      {"op": "channel", "depolarizing": 1.0, "targets": [1]},
      {"op": "reset", "target": 1}]})");
  const Circuit parsed = circuit_from_json(j);
  EXPECT_EQ(parsed.size(), 4u);
  expect_error(ErrorCode::UnknownKind, [] {
    (void)circuit_from_json(nlohmann::json::parse(
        R"({"n_qubits": 1, "instructions": [{"op": "unitary", "kind": "T", "targets": [0]}]})"));
  });
  expect_error(ErrorCode::Parse, [] { (void)circuit_from_json(nlohmann::json::parse(R"({"instructions": []})")); });
}

TEST(circuit, unitary_matches_oracle) {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 1 + rng() % 4;
    const auto gates = oracle::random_gates(rng, n, 15);
    EXPECT_LT(max_abs_diff(bridge::to_circuit(gates, n).unitary(), oracle::circuit_unitary(gates, n)), 1e-12);
  }
}
