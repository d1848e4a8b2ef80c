#include <benchmark/benchmark.h>

#include <cmath>

#include "fracopt/approximator.hpp"
#include "fracopt/catalog.hpp"
#include "fracopt/expansion.hpp"
#include "fracopt/operators.hpp"
#include "fracopt/pipelines.hpp"
#include "fracopt/special.hpp"

using namespace fracopt;

static void BM_Gamma(benchmark::State& state) {
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fracopt::gamma(x));
    x = x < 20.0 ? x + 0.37 : 0.3;
  }
}
BENCHMARK(BM_Gamma);

static void BM_BuildScheme(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ExpansionScheme::build(0.5, 2, N));
}
BENCHMARK(BM_BuildScheme)->Arg(2)->Arg(6)->Arg(12);

static void BM_CaputoQuadrature(benchmark::State& state) {
  const SampledFunction x([](double t) { return std::exp(2 * t); }, 0.0, 1.0,
                          {[](double t) { return 2 * std::exp(2 * t); }});
  for (auto _ : state) benchmark::DoNotOptimize(caputo_derivative_left(x, 0.5, 0.0, 0.7));
}
BENCHMARK(BM_CaputoQuadrature);

static void BM_ApproximateT4(benchmark::State& state) {
  const SampledFunction x([](double t) { return std::pow(t, 4); }, 0.0, 1.0,
                          {[](double t) { return 4 * std::pow(t, 3); }});
  const auto scheme = ExpansionScheme::build(0.5, 2, static_cast<int>(state.range(0)));
  const auto grid = Grid::make(0.0, 1.0, 101);
  for (auto _ : state) benchmark::DoNotOptimize(approximate_rl_derivative(x, scheme, grid));
}
BENCHMARK(BM_ApproximateT4)->Arg(2)->Arg(6)->Unit(benchmark::kMicrosecond);

static void BM_Example1(benchmark::State& state) {
  const auto e = example1(0.5);
  const auto pipeline = state.range(0) == 0 ? Pipeline::FractionalConditions
                                            : Pipeline::ReduceThenClassical;
  PipelineOptions o;
  o.approximation.N = 3;
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(e.problem, pipeline, o));
}
BENCHMARK(BM_Example1)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
