#include <benchmark/benchmark.h>

#include "mtt/orchestrator.hpp"

using namespace mtt;

namespace {

PartitionConstraints bench_config() {
  PartitionConstraints c;
  c.ctu_size = 64;
  c.min_qt_size = 8;
  c.max_mtt_depth = 2;
  c.max_bt_size = 32;
  c.max_tt_size = 32;
  return c;
}

void BM_CodeBlock(benchmark::State& state) {
  int n = int(state.range(0));
  LumaFrame f = synth_frame(SynthKind::Noise, n, n, 1);
  QpParams qp = qp_params(27);
  for (auto _ : state)
    benchmark::DoNotOptimize(code_block(f, 0, 0, n, n, qp));
}
BENCHMARK(BM_CodeBlock)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_RdoSearchUnguided(benchmark::State& state) {
  auto cons = bench_config();
  LumaFrame f = synth_frame(SynthKind::Noise, 64, 64, 2);
  QpParams qp = qp_params(int(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(rdo_search(f, 0, 0, qp, cons));
}
BENCHMARK(BM_RdoSearchUnguided)->Arg(22)->Arg(37);

void BM_RdoSearchGuided(benchmark::State& state) {
  auto cons = bench_config();
  LumaFrame f = synth_frame(SynthKind::Noise, 64, 64, 2);
  auto ref = rdo_search(f, 0, 0, qp_params(37), cons);
  SkipGuide guide = build_guide({ref.tree}, 64, 64, 64, GuideMode::Scalar);
  NsGate gate = [&](const CuGeom& g, const std::vector<SplitType>& legal) {
    return skip_decision(g, legal, guide) == SkipDecision::EvaluateNS;
  };
  QpParams qp = qp_params(int(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(rdo_search(f, 0, 0, qp, cons, &gate));
}
BENCHMARK(BM_RdoSearchGuided)->Arg(22)->Arg(27);

}  // namespace

BENCHMARK_MAIN();
