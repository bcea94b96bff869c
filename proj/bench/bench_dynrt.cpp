#include <benchmark/benchmark.h>

#include "dynrt/drt.hpp"
#include "dynrt/edrt.hpp"
#include "dynrt/rt.hpp"
#include "dynrt/scenario.hpp"

namespace {

const dynrt::Scene& v2v() {
  static const dynrt::Scene scene = dynrt::generate_v2v_scenario(dynrt::V2vScenario{});
  return scene;
}

dynrt::PredictionConfig window(int rounds) {
  dynrt::PredictionConfig p;
  p.t_c = 1.0;
  p.dt = 0.1;
  p.rounds = rounds;
  p.close_last_window = true;
  return p;
}

void BM_TraceParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dynrt::trace_snapshot(v2v(), 0.45));
}

void BM_TraceSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dynrt::trace_snapshot_serial(v2v(), 0.45));
}

void BM_FindPathsParallel(benchmark::State& state) {
  const dynrt::SceneInstant at(v2v(), 0.45);
  for (auto _ : state) benchmark::DoNotOptimize(dynrt::find_paths(at));
}

void BM_FindPathsSerial(benchmark::State& state) {
  const dynrt::SceneInstant at(v2v(), 0.45);
  for (auto _ : state) benchmark::DoNotOptimize(dynrt::find_paths_serial(at));
}

void BM_FieldsParallel(benchmark::State& state) {
  const dynrt::SceneInstant at(v2v(), 0.45);
  const auto paths = dynrt::find_paths_serial(at);
  for (auto _ : state) benchmark::DoNotOptimize(dynrt::compute_fields(paths, at));
}

void BM_FieldsSerial(benchmark::State& state) {
  const dynrt::SceneInstant at(v2v(), 0.45);
  const auto paths = dynrt::find_paths_serial(at);
  for (auto _ : state) benchmark::DoNotOptimize(dynrt::compute_fields_serial(paths, at));
}

void BM_DrtRun(benchmark::State& state) {
  const auto cfg = window(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dynrt::drt_run(v2v(), cfg));
}

void BM_EdrtRun(benchmark::State& state) {
  const auto cfg = window(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dynrt::edrt_run(v2v(), cfg));
}

}  // namespace

BENCHMARK(BM_TraceParallel)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TraceSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FindPathsParallel)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FindPathsSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FieldsParallel)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FieldsSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DrtRun)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EdrtRun)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
