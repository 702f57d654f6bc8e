#include "qlab/epr.hpp"

#include <numbers>

#include "qlab/descriptor.hpp"

namespace qlab::epr {

namespace {

constexpr double kProbeOffset = 0.7;

void prepare_and_rotate(Circuit& c, const EprConfig& cfg) {
  c.h(kAlice).cx(kAlice, kBob);
  c.rx(cfg.theta, kAlice).rx(cfg.phi, kBob);
  if (cfg.x_basis) c.h(kAlice).h(kBob);
}

}  // namespace

Circuit build_epr_unitary(const EprConfig& cfg, Stage stage) {
  Circuit c(kNumQubits, 0);
  prepare_and_rotate(c, cfg);
  if (stage == Stage::AfterRotations) return c;
  c.cx(kAlice, kAliceMemory).cx(kBob, kBobMemory);
  if (stage == Stage::AfterMemories) return c;
  c.cx(kAliceMemory, kCheck).cx(kBobMemory, kCheck);
  return c;
}

Circuit build_epr_circuit(const EprConfig& cfg) {
  Circuit c(kNumQubits, kNumClbits);
  prepare_and_rotate(c, cfg);
  if (cfg.deferred) {
    c.cx(kAlice, kAliceMemory).cx(kBob, kBobMemory);
    c.cx(kAliceMemory, kCheck).cx(kBobMemory, kCheck);
    c.measure(kCheck, kCheckClbit);
    c.measure(kAliceMemory, kAliceClbit).measure(kBobMemory, kBobClbit);
  } else {
    // Classically controlled parity flips realized as quantum CNOTs from the
    // already-measured qubits.
    c.measure(kAlice, kAliceClbit).measure(kBob, kBobClbit);
    c.cx(kAlice, kCheck).cx(kBob, kCheck);
    c.measure(kCheck, kCheckClbit);
  }
  return c;
}

double check_distribution(const EprConfig& cfg) {
  const RunResult r = run_density(build_epr_circuit(cfg));
  const std::size_t pos[] = {kCheckClbit};
  const Distribution m = marginal(r.distribution, pos);
  const auto it = m.find("1");
  return it == m.end() ? 0.0 : it->second;
}

std::vector<double> angle_grid(std::size_t steps) {
  if (steps == 0) throw Error(ErrorCode::BadParams, "angle grid needs at least one step");
  if (steps == 1) return {0.0};
  std::vector<double> g(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    g[k] = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(k) /
                                   static_cast<double>(steps - 1);
  }
  return g;
}

std::vector<SweepRow> sweep(std::span<const double> theta_grid, std::span<const double> phi_grid,
                            bool deferred) {
  if (theta_grid.empty() || phi_grid.empty()) {
    throw Error(ErrorCode::BadParams, "sweep grids must be nonempty");
  }
  std::vector<SweepRow> rows;
  rows.reserve(theta_grid.size() * phi_grid.size());
  for (double theta : theta_grid) {
    for (double phi : phi_grid) {
      rows.push_back({theta, phi, check_distribution({theta, phi, deferred, false})});
    }
  }
  return rows;
}

EprReport info_flow_report(const EprConfig& cfg) {
  if (!cfg.deferred) {
    throw Error(ErrorCode::BadParams, "information-flow report needs the deferred circuit");
  }
  auto builder_for = [&cfg](Stage stage) {
    return [cfg, stage](std::span<const double> p) {
      EprConfig c = cfg;
      c.theta = p[0];
      c.phi = p[1];
      return build_epr_unitary(c, stage);
    };
  };
  const double base[] = {cfg.theta, cfg.phi};
  auto probe = [&](Stage stage, Qubit q) {
    const auto builder = builder_for(stage);
    const auto dt =
        dependence_probe(builder, base, 0, {cfg.theta, cfg.theta + kProbeOffset}, q);
    const auto dp = dependence_probe(builder, base, 1, {cfg.phi, cfg.phi + kProbeOffset}, q);
    return ParamDependence{dt.depends, dp.depends, dt.max_delta, dp.max_delta};
  };

  EprReport report;
  report.config = cfg;
  report.p_check_one = check_distribution(cfg);
  report.correlation = 1.0 - 2.0 * report.p_check_one;
  report.alice_memory = probe(Stage::AfterMemories, kAliceMemory);
  report.bob_memory = probe(Stage::AfterMemories, kBobMemory);
  report.check = probe(Stage::Full, kCheck);
  return report;
}

DensityMatrix local_marginal(const EprConfig& cfg, Qubit q) {
  const RunResult r = run_density(build_epr_unitary(cfg, Stage::AfterRotations));
  const QubitList keep{q};
  return partial_trace(r.final_state, keep);
}

}  // namespace qlab::epr
