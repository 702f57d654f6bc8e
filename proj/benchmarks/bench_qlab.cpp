#include <benchmark/benchmark.h>

#include "qlab/ctc.hpp"
#include "qlab/descriptor.hpp"
#include "qlab/epr.hpp"
#include "qlab/szilard.hpp"

namespace {

qlab::Circuit layered(std::size_t n, std::size_t layers) {
  qlab::Circuit c(n);
  for (std::size_t l = 0; l < layers; ++l) {
    for (qlab::Qubit q = 0; q < n; ++q) c.rx(0.1 * static_cast<double>(l + q + 1), q);
    for (qlab::Qubit q = 0; q + 1 < n; ++q) c.cx(q, q + 1);
  }
  return c;
}

void density_evolution(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const qlab::Circuit c = layered(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(qlab::run_density(c));
  state.SetLabel(std::to_string(c.instructions().size()) + " instructions");
}
BENCHMARK(density_evolution)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

void descriptor_frame(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const qlab::Circuit c = layered(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(qlab::evolve_frame(c));
}
BENCHMARK(descriptor_frame)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void locality_audit_epr(benchmark::State& state) {
  const qlab::Circuit c = qlab::epr::build_epr_unitary({0.4, 1.1, true, false});
  for (auto _ : state) benchmark::DoNotOptimize(qlab::locality_audit(c));
}
BENCHMARK(locality_audit_epr)->Unit(benchmark::kMillisecond);

void szilard_cycles(benchmark::State& state) {
  qlab::szilard::SzilardConfig cfg;
  cfg.cycles = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qlab::szilard::run_cycles(cfg));
}
BENCHMARK(szilard_cycles)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void ctc_solve(benchmark::State& state) {
  const auto protocol = state.range(0) == 0 ? qlab::ctc::Protocol::Single : qlab::ctc::Protocol::Bb84;
  const qlab::ctc::CtcProblem p = qlab::ctc::protocol_problem(protocol, qlab::ctc::Label::Minus);
  for (auto _ : state) benchmark::DoNotOptimize(qlab::ctc::solve_fixed_point(p));
  state.SetLabel(std::string(qlab::ctc::to_string(protocol)));
}
BENCHMARK(ctc_solve)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void ctc_grandfather(benchmark::State& state) {
  const qlab::ctc::CtcProblem p =
      qlab::ctc::make_problem(qlab::ComplexMatrix{{0, 1}, {1, 0}}, qlab::DensityMatrix::zero_state(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(qlab::ctc::solve_fixed_point(p));
}
BENCHMARK(ctc_grandfather)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
