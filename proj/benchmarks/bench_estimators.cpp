#include <benchmark/benchmark.h>

#include "remis/saddle.hpp"

#include "remis/experiments.hpp"

namespace {

using namespace remis;

const Workspace& workspace() {
  static const Workspace ws = build_workspace(GridwalkConfig{});
  return ws;
}

void SampleTransitions(benchmark::State& state) {
  const Workspace& ws = workspace();
  const std::size_t n = state.range(0);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    Dataset data = sample_transitions(ws.env.mdp, ws.family.d_D, n, SeedSpec{7, rep++});
    benchmark::DoNotOptimize(data.s.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(SampleTransitions)->Arg(500)->Arg(8000);

void EstimateQ(benchmark::State& state) {
  const Workspace& ws = workspace();
  const std::size_t n = state.range(0);
  const Dataset data = sample_transitions(ws.env.mdp, ws.family.d_D, n, SeedSpec{7, 0});
  const Regularizer reg = quadratic(SAFunction::Zero(ws.env.mdp.sa_count()));
  for (auto _ : state) {
    const ConstraintSystem sys =
        build_q_system(data, ws.primal, ws.disc_ratio, ws.env.target, ws.env.mdp.gamma);
    QEstimate est = solve_regularized(sys, ws.primal, reg, ws.family.U);
    benchmark::DoNotOptimize(est.values);
  }
}
BENCHMARK(EstimateQ)->Arg(500)->Arg(8000);

void EstimateW(benchmark::State& state) {
  const Workspace& ws = workspace();
  const std::size_t n = state.range(0);
  const Dataset data = sample_transitions(ws.env.mdp, ws.family.d_D, n, SeedSpec{7, 0});
  const InitDataset init = sample_initial(ws.env.mdp, n, SeedSpec{7, 0});
  const Regularizer reg = quadratic(SAFunction::Zero(ws.env.mdp.sa_count()));
  for (auto _ : state) {
    const ConstraintSystem sys = build_w_system(data, init, ws.w_primal, ws.w_disc,
                                                ws.env.target, ws.env.mdp.gamma);
    WEstimate est = solve_regularized(sys, ws.w_primal, reg, ws.family.d_D);
    benchmark::DoNotOptimize(est.values);
  }
}
BENCHMARK(EstimateW)->Arg(500)->Arg(8000);

void ClosedFormDual(benchmark::State& state) {
  const Workspace& ws = workspace();
  for (auto _ : state) {
    SaddleReport rep = w_star(ws.env.mdp, ws.env.target, ws.family.U, ws.q_pi, ws.family.d_D);
    benchmark::DoNotOptimize(rep.dual);
  }
}
BENCHMARK(ClosedFormDual);

}  // namespace
