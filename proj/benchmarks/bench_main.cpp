#include <benchmark/benchmark.h>

#include "lclab/berwald.hpp"
#include "lclab/laplace.hpp"
#include "lclab/measure.hpp"
#include "lclab/poisson.hpp"

namespace {

void BM_MomentTable(benchmark::State& state) {
  lclab::MeasureMomentSource src(lclab::HalfLineMeasure::uniform(1.0, 2.0));
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(lclab::build_moment_table(src, 0.5, n_max));
}
BENCHMARK(BM_MomentTable)->Arg(16)->Arg(50)->Arg(128);

void BM_BBTransform(benchmark::State& state) {
  const auto mu = lclab::HalfLineMeasure::uniform(1.0, 2.0);
  const lclab::Quadruple q(0, static_cast<int>(state.range(0)),
                           static_cast<int>(state.range(0)),
                           2 * static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lclab::bb_transform(mu, q));
}
BENCHMARK(BM_BBTransform)->Arg(1)->Arg(3)->Arg(6);

void BM_PostInversion(benchmark::State& state) {
  lclab::MeasureMomentSource src(lclab::HalfLineMeasure::uniform(1.0, 2.0));
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(lclab::post_inversion_sum(src, t, 1.5));
}
BENCHMARK(BM_PostInversion)->Arg(50)->Arg(400)->Arg(2000);

void BM_McFunctional(benchmark::State& state) {
  lclab::Payoff f;
  f.values = {std::log(2.0)};
  f.beyond = 0.0;
  const auto policy = lclab::optimal_policy(f, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        lclab::mc_functional(policy, f, 1.0, state.range(0), 99));
}
BENCHMARK(BM_McFunctional)->Arg(100)->Arg(1000);

void BM_Simulate(benchmark::State& state) {
  const auto policy = lclab::IntensityPolicy::constant(2.0);
  std::uint64_t stream = 0;
  for (auto _ : state) {
    const auto noise = lclab::PlanarNoise::sample(1.0, 2.0, 5, stream++);
    benchmark::DoNotOptimize(lclab::simulate_counting(policy, noise));
  }
}
BENCHMARK(BM_Simulate);

}  // namespace

BENCHMARK_MAIN();
