#include <benchmark/benchmark.h>

#include "rgcc/generators.hpp"
#include "rgcc/oracle.hpp"

using namespace rgcc;

namespace {

MatrixInstance bench_instance(int64_t rows) {
  RandomParams p;
  p.rows = static_cast<int>(rows);
  p.cols = 4;
  p.values = 3;
  p.states = 3;
  p.tightness = 0.3;
  p.seed = 7;
  return gen_random(p);
}

void BM_CountSerial(benchmark::State& state) {
  const MatrixInstance inst = bench_instance(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_count(inst));
}

void BM_CountParallel(benchmark::State& state) {
  const MatrixInstance inst = bench_instance(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_count_parallel(inst));
}

void BM_DcSerial(benchmark::State& state) {
  const MatrixInstance inst = bench_instance(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_dc(inst));
}

void BM_DcParallel(benchmark::State& state) {
  const MatrixInstance inst = bench_instance(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_dc_parallel(inst));
}

}  // namespace

BENCHMARK(BM_CountSerial)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CountParallel)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DcSerial)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DcParallel)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
