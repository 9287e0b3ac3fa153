#include <benchmark/benchmark.h>

#include "ltt/analytic.hpp"

namespace {

void BM_PmfGivenOrigin(benchmark::State& state) {
  const ltt::BirthDeathParams params(1.0, 0.5);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ltt::pmf_given_origin(n, 0.5, 10.0, params));
  state.SetComplexityN(n);
}
BENCHMARK(BM_PmfGivenOrigin)->RangeMultiplier(10)->Range(10, 100000)->Complexity();

void BM_OriginCurve(benchmark::State& state) {
  const ltt::BirthDeathParams params(1.0, 0.5);
  const auto grid = ltt::uniform_sigma_grid(101);
  for (auto _ : state) benchmark::DoNotOptimize(ltt::ltt_curve(ltt::OriginAge{10.0}, 10, params, grid));
}
BENCHMARK(BM_OriginCurve);

void BM_UnknownAgeCurve(benchmark::State& state) {
  const double rho = static_cast<double>(state.range(0)) / 100.0;
  const ltt::BirthDeathParams params(1.0, rho);
  const auto grid = ltt::uniform_sigma_grid(101);
  for (auto _ : state) benchmark::DoNotOptimize(ltt::ltt_curve(ltt::UniformAgePrior{}, 10, params, grid));
}
BENCHMARK(BM_UnknownAgeCurve)->Arg(0)->Arg(50)->Arg(100);

void BM_UnknownAgePmf(benchmark::State& state) {
  const ltt::BirthDeathParams params(1.0, 0.5);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ltt::pmf_unknown_age(n, 0.5, params));
}
BENCHMARK(BM_UnknownAgePmf)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
