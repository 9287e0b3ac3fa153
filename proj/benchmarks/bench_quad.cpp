#include <cmath>

#include <benchmark/benchmark.h>

#include "ltt/quad.hpp"

namespace {

void BM_SmoothUnit(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltt::integrate_unit([](double x) { return std::exp(-x) * std::cos(5.0 * x); }, {}));
  }
}
BENCHMARK(BM_SmoothUnit);

void BM_EndpointSingularity(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltt::integrate_unit([](double x) { return -std::log(x); }, {}));
  }
}
BENCHMARK(BM_EndpointSingularity);

void BM_AlgebraicTail(benchmark::State& state) {
  const auto f = [](double t) { return t / std::pow(1.0 + t, 3); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltt::integrate_semi_infinite(f, {}, ltt::HalfLineMap::kRational));
  }
}
BENCHMARK(BM_AlgebraicTail);

}  // namespace

BENCHMARK_MAIN();
