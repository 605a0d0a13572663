#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "afpk/fraccalc.hpp"
#include "afpk/kernel.hpp"
#include "afpk/montecarlo.hpp"
#include "afpk/solver.hpp"
#include "afpk/special.hpp"

using namespace afpk;

namespace {

const OperatorSpec& plane() {
  static const OperatorSpec s({{1, BernsteinSpec::power(0.5)}, {1, BernsteinSpec::brownian()}});
  return s;
}

void BM_MittagLeffler(benchmark::State& st) {
  const double a = st.range(0) / 10.0;
  double z = -0.5;
  for (auto _ : st) {
    benchmark::DoNotOptimize(mittag_leffler({a, 1.0}, z));
    z = z < -40.0 ? -0.5 : z * 1.07;
  }
}
BENCHMARK(BM_MittagLeffler)->Arg(3)->Arg(5)->Arg(9);

void BM_StableDensity(benchmark::State& st) {
  double s = 0.05;
  for (auto _ : st) {
    benchmark::DoNotOptimize(stable_density(0.7, s));
    s = s > 50.0 ? 0.05 : s * 1.1;
  }
}
BENCHMARK(BM_StableDensity);

void BM_QuadratureKernelSetup(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(QuadratureKernel(plane(), 0.5, 0.5, 1.0));
}
BENCHMARK(BM_QuadratureKernelSetup)->Unit(benchmark::kMillisecond);

void BM_QuadratureKernelEval(benchmark::State& st) {
  const QuadratureKernel q(plane(), 0.5, 0.5, 1.0);
  std::vector<double> x{0.3, 0.7};
  for (auto _ : st) {
    benchmark::DoNotOptimize(q(x));
    x[0] = x[0] > 10.0 ? 0.3 : x[0] * 1.3;
  }
}
BENCHMARK(BM_QuadratureKernelEval)->Unit(benchmark::kMicrosecond);

void BM_FractionalIntegral(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const TimeGrid g(1.0 / n, n);
  std::vector<double> v(n + 1);
  for (std::size_t k = 0; k <= n; ++k) v[k] = std::sin(g.node(k));
  const TimeSeries f(g, v);
  for (auto _ : st) benchmark::DoNotOptimize(fractional_integral(f, 0.5));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_FractionalIntegral)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

void BM_ZeroInitSolve(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const ScalarField grid = ScalarField::zeros(plane(), {n, n}, {8.0, 8.0});
  const TimeGrid tg(1.0 / 128, 128);
  const ZeroInitSolver solve(plane(), 0.5, tg, grid);
  ScalarField g = grid;
  std::vector<double> x(2);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.point(i, x);
    g.values[i] = std::exp(-x[0] * x[0] - x[1] * x[1]);
  }
  const SpaceTimeField f = SpaceTimeField::separable(tg, g, std::vector<double>(tg.n + 1, 1.0));
  for (auto _ : st) benchmark::DoNotOptimize(solve(f));
}
BENCHMARK(BM_ZeroInitSolve)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SampleEndpoints(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(sample_endpoints({plane(), 0.5, 1.0, 10000, 7}));
}
BENCHMARK(BM_SampleEndpoints)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
