#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "fracpoisson/analytic.hpp"
#include "fracpoisson/mc.hpp"
#include "fracpoisson/odegen.hpp"
#include "fracpoisson/pascal.hpp"
#include "fracpoisson/specfun.hpp"

using namespace fracpoisson;

static void BM_MittagLefflerModerate(benchmark::State& state) {
  const double z = -0.01 * static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::mittag_leffler(0.7, z));
  }
}
BENCHMARK(BM_MittagLefflerModerate)->Arg(50)->Arg(200)->Arg(350);

static void BM_PmfVector(benchmark::State& state) {
  const ProcessParams params(0.7, 1.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytic::pmf_vector(n, 1.0, params, 1e-12));
  }
}
BENCHMARK(BM_PmfVector)->Arg(20)->Arg(60);

static void BM_GeneratorCoefficient(benchmark::State& state) {
  const ProcessParams params(0.7, 1.0);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(odegen::coefficient(0, k, params));
  }
}
BENCHMARK(BM_GeneratorCoefficient)->Arg(10)->Arg(40)->Arg(79);

static void BM_GeneratorMatrix(benchmark::State& state) {
  const ProcessParams params(0.7, 1.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(odegen::generator_matrix(n, params));
  }
}
BENCHMARK(BM_GeneratorMatrix)->Unit(benchmark::kMillisecond)->Arg(20)->Arg(40);

static void BM_Evolve(benchmark::State& state) {
  const auto gen = odegen::generator_matrix(80, ProcessParams(0.7, 1.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(odegen::evolve(gen, 1.0, {0.5, 1.0}, 1e-11));
  }
}
BENCHMARK(BM_Evolve)->Unit(benchmark::kMillisecond);

static void BM_PascalRoundtrip(benchmark::State& state) {
  pascal::ExactVector v;
  for (int i = 0; i < 60; ++i) v.values.push_back(1000000 - 33333 * (i % 7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pascal::apply_inverse_pascal(pascal::apply_pascal(v)));
  }
}
BENCHMARK(BM_PascalRoundtrip);

static void BM_WaitingTimeDraws(benchmark::State& state) {
  const ProcessParams params(0.7, 1.0);
  mc::waiting_time_survival(params, 1.0);  // warm the cache
  mc::RngState rng(42, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc::sample_waiting_time(rng, params));
  }
}
BENCHMARK(BM_WaitingTimeDraws);

static void BM_CaputoResidual(benchmark::State& state) {
  const ProcessParams params(0.7, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(analytic::caputo_residual(1, 1.0, params, 1e-8));
  }
}
BENCHMARK(BM_CaputoResidual)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
