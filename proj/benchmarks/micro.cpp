// Per-step costs on the benchmark instance sizes.

#include <cmath>

#include <benchmark/benchmark.h>

#include <proxbench/algorithms.hpp>
#include <proxbench/instances.hpp>
#include <proxbench/run.hpp>

using namespace proxbench;

namespace {

Shape cdp_shape(std::int64_t n) {
  return n > 128 ? Shape{static_cast<std::size_t>(std::sqrt(n)), static_cast<std::size_t>(std::sqrt(n))}
                 : Shape{static_cast<std::size_t>(n)};
}

void BM_MaskedFourier(benchmark::State& state) {
  const Instance inst = gen_cdp(cdp_shape(state.range(0)), 2, 1);
  const auto& amp = std::get<Amplitude>(inst.problem.sets()[0].variant());
  const Signal z = random_start(inst, 2);
  for (auto _ : state) benchmark::DoNotOptimize(apply_map(amp.map, z));
}
BENCHMARK(BM_MaskedFourier)->Arg(128)->Arg(4096);

void BM_AmplitudeProjection(benchmark::State& state) {
  const Instance inst = gen_cdp(cdp_shape(state.range(0)), 2, 1);
  const Signal z = random_start(inst, 2);
  for (auto _ : state) benchmark::DoNotOptimize(project(inst.problem.sets()[0], z));
}
BENCHMARK(BM_AmplitudeProjection)->Arg(128)->Arg(4096);

void BM_SparseConeProjection(benchmark::State& state) {
  const Instance inst = gen_sparse_dots(SparseDotsParams{}, 1);
  const Signal z = random_start(inst, 2);
  for (auto _ : state) benchmark::DoNotOptimize(project(inst.problem.sets()[0], z));
}
BENCHMARK(BM_SparseConeProjection);

template <AlgorithmKind Kind>
void BM_CdpStep(benchmark::State& state) {
  const Instance inst = gen_cdp(cdp_shape(state.range(0)), 10, 1);
  const Signal z = random_start(inst, 2);
  for (auto _ : state) {
    if constexpr (Kind == AlgorithmKind::kCP) benchmark::DoNotOptimize(cp_step(inst.problem, z));
    if constexpr (Kind == AlgorithmKind::kAVP) benchmark::DoNotOptimize(avp_step(inst.problem, z));
    if constexpr (Kind == AlgorithmKind::kCDRL) benchmark::DoNotOptimize(cdrl_step(inst.problem, 0.33, z));
  }
}
BENCHMARK(BM_CdpStep<AlgorithmKind::kCP>)->Arg(128)->Arg(4096);
BENCHMARK(BM_CdpStep<AlgorithmKind::kAVP>)->Arg(128)->Arg(4096);
BENCHMARK(BM_CdpStep<AlgorithmKind::kCDRL>)->Arg(128)->Arg(4096);

void BM_SrclocRun(benchmark::State& state) {
  const Instance inst = gen_srcloc(10, false, 1);
  const Signal z0 = random_start(inst, 2);
  const AlgorithmSpec spec = AlgorithmSpec::defaults(AlgorithmKind::kCP);
  for (auto _ : state) benchmark::DoNotOptimize(run(spec, inst.problem, z0, Termination{1e-11, 10000}));
}
BENCHMARK(BM_SrclocRun);

}  // namespace

BENCHMARK_MAIN();
