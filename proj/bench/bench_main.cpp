// Throughput comparisons: FFT operators against the dense oracle, and the
// OpenMP paths against their serial counterparts.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>
#include <vector>

#include "gbo/dense_reference.hpp"
#include "gbo/harness.hpp"
#include "gbo/kernels.hpp"
#include "gbo/spectral_core.hpp"

namespace {

gbo::PhysicalField smooth_field(const gbo::SpectralGrid& g) {
  return gbo::sample(g, [&](double x) { return 1.0 / (1.0 + x * x) + 0.3 * x / (4.0 + x * x); });
}

void BM_DerivativeFft(benchmark::State& state) {
  const gbo::SpectralGrid g(static_cast<int>(state.range(0)), 2.0);
  const auto u = smooth_field(g);
  for (auto _ : state) benchmark::DoNotOptimize(gbo::hilbert_second_derivative(u, g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DerivativeFft)->RangeMultiplier(2)->Range(32, 8192)->Complexity(benchmark::oNLogN);

void BM_DerivativeDense(benchmark::State& state) {
  const gbo::SpectralGrid g(static_cast<int>(state.range(0)), 2.0);
  const auto u = smooth_field(g);
  const auto op = gbo::dense_operator(g, gbo::DenseOperator::HS2Phys);
  for (auto _ : state) benchmark::DoNotOptimize(gbo::apply_dense(op, u));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DerivativeDense)->RangeMultiplier(2)->Range(32, gbo::kDenseMaxN)->Complexity(benchmark::oNSquared);

// Pointwise power kernel with one thread against all available threads.
void BM_PowerKernel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int threads = state.range(1) ? omp_get_max_threads() : 1;
  std::vector<double> u(n), out(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::sin(0.001 * static_cast<double>(i));
  const int saved = omp_get_max_threads();
  omp_set_num_threads(threads);
  for (auto _ : state) {
    gbo::kernels::power(u, 3, out);
    benchmark::DoNotOptimize(out.data());
  }
  omp_set_num_threads(saved);
  state.counters["threads"] = threads;
}
BENCHMARK(BM_PowerKernel)->ArgsProduct({{1 << 16, 1 << 20}, {0, 1}});

// A small convergence sweep, serial against OpenMP job scheduling.
void BM_Sweep(benchmark::State& state) {
  gbo::RunConfig cfg;
  cfg.n = 128;
  cfg.alpha = 6.0;
  cfg.initial.x0 = -2.0;
  cfg.t_final = 1.0;
  gbo::SweepOptions opts;
  opts.parallel = state.range(0) != 0;
  const std::vector<gbo::SweepEntry> schemes{{gbo::Scheme::IRK_MC, 1}, {gbo::Scheme::IRK_MC, 2},
                                             {gbo::Scheme::IRK_EC_SAV, 2}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(gbo::convergence_sweep(cfg, {0.1, 0.05, 0.025}, schemes, opts));
  }
  state.counters["threads"] = opts.parallel ? omp_get_max_threads() : 1;
}
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
