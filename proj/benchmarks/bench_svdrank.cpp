#include <benchmark/benchmark.h>

#include "svdrank/algorithms.hpp"
#include "svdrank/baselines.hpp"
#include "svdrank/metrics.hpp"
#include "svdrank/model.hpp"

namespace {

using namespace svdrank;

MeasurementSet ero_instance(std::size_t n, double p) {
  const ScoreVector r = generate_scores({}, n, 7);
  return generate_ero(r, {n, p, 0.9, 11});
}

void BM_GenerateEro(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ScoreVector r = generate_scores({}, n, 7);
  for (auto _ : state) benchmark::DoNotOptimize(generate_ero(r, {n, 0.2, 0.9, 11}));
}

void BM_Top2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SkewSparseMatrix H = build_H(ero_instance(n, 0.2)).H;
  for (auto _ : state) benchmark::DoNotOptimize(top2_svd(H));
}

void BM_SvdRs(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SkewSparseMatrix H = build_H(ero_instance(n, 0.2)).H;
  for (auto _ : state) benchmark::DoNotOptimize(svd_rs(H));
}

void BM_SvdNrs(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SkewSparseMatrix H = build_H(ero_instance(n, 0.2)).H;
  for (auto _ : state) benchmark::DoNotOptimize(svd_nrs(H));
}

void BM_LeastSquares(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const IncidenceSystem sys = IncidenceSystem::from(ero_instance(n, 0.2));
  for (auto _ : state) benchmark::DoNotOptimize(least_squares_rank(sys, n));
}

void BM_Kendall(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Permutation a = Permutation::from_scores(generate_scores({}, n, 1).r);
  const Permutation b = Permutation::from_scores(generate_scores({}, n, 2).r);
  for (auto _ : state) benchmark::DoNotOptimize(kendall_distance(a, b));
  state.SetComplexityN(state.range(0));
}

void BM_Completion(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MeasurementSet m = ero_instance(n, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(complete_matrix(m));
}

}  // namespace

BENCHMARK(BM_GenerateEro)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Top2)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SvdRs)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SvdNrs)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LeastSquares)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Kendall)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity(benchmark::oNLogN);
BENCHMARK(BM_Completion)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
