#include <benchmark/benchmark.h>

#include "ltt/sim.hpp"

namespace {

void BM_SimulateComplete(benchmark::State& state) {
  const ltt::BirthDeathParams params(1.0, 0.5);
  const double t = static_cast<double>(state.range(0));
  ltt::Rng rng = ltt::replicate_stream(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(ltt::simulate_complete(params, t, 1, rng));
}
BENCHMARK(BM_SimulateComplete)->Arg(2)->Arg(8)->Arg(12);

void BM_ReconstructedCounts(benchmark::State& state) {
  ltt::Rng rng = ltt::replicate_stream(2, 0);
  const ltt::ConditionedSampler sampler(ltt::OriginAge{10.0}, 50, ltt::BirthDeathParams(1.0, 0.7));
  const ltt::EventLog log = sampler.sample(rng, 10'000'000).log;
  const auto grid = ltt::uniform_sigma_grid(101);
  std::vector<double> times;
  for (double s : grid) times.push_back(s * log.t_end);
  for (auto _ : state) benchmark::DoNotOptimize(ltt::reconstructed_counts(log, times));
}
BENCHMARK(BM_ReconstructedCounts);

void BM_ConditionedSample(benchmark::State& state) {
  const ltt::BirthDeathParams params(1.0, 0.5);
  ltt::Rng rng = ltt::replicate_stream(3, 0);
  const ltt::ConditionedSampler origin(ltt::OriginAge{3.0}, 6, params);
  const ltt::ConditionedSampler mrca(ltt::MrcaAge{3.0}, 6, params);
  const ltt::ConditionedSampler prior(ltt::UniformAgePrior{}, 5, params);
  const ltt::ConditionedSampler* sampler = state.range(0) == 0 ? &origin : state.range(0) == 1 ? &mrca : &prior;
  for (auto _ : state) benchmark::DoNotOptimize(sampler->sample(rng, 100'000'000));
}
BENCHMARK(BM_ConditionedSample)->ArgName("condition")->Arg(0)->Arg(1)->Arg(2);

void BM_McLtt(benchmark::State& state) {
  ltt::McOptions options;
  options.reps = 2000;
  options.threads = static_cast<unsigned>(state.range(0));
  const auto grid = ltt::uniform_sigma_grid(11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltt::mc_ltt(ltt::OriginAge{10.0}, 5, ltt::BirthDeathParams(0.2, 0.0), grid, options));
  }
}
BENCHMARK(BM_McLtt)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
