#include <benchmark/benchmark.h>

#include <vector>

#include "xilab/critical_line.hpp"
#include "xilab/eta_integral.hpp"
#include "xilab/theta_series.hpp"

namespace {

void BM_Psi(benchmark::State& state) {
  double tau = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(xilab::psi(tau).value);
    tau = tau < 3.0 ? tau + 0.01 : 0.5;
  }
}
BENCHMARK(BM_Psi);

void BM_GKernel(benchmark::State& state) {
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(xilab::g_kernel(t).value);
    t = t < 1.0 ? t + 0.001 : 0.0;
  }
}
BENCHMARK(BM_GKernel);

void BM_KernelQuadratureSetup(benchmark::State& state) {
  for (auto _ : state) {
    const xilab::KernelQuadrature q(xilab::Kernel::G, 1.0, 100.0, {});
    benchmark::DoNotOptimize(q.panels());
  }
}
BENCHMARK(BM_KernelQuadratureSetup)->Unit(benchmark::kMillisecond);

void BM_UV(benchmark::State& state) {
  const xilab::KernelQuadrature q(xilab::Kernel::G, 1.0, 100.0, {});
  double y = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(q.uv(0.5, y).u.value);
    y = y < 100.0 ? y + 0.37 : 0.0;
  }
}
BENCHMARK(BM_UV)->Unit(benchmark::kMicrosecond);

void BM_UVGridRow(benchmark::State& state) {
  const xilab::KernelQuadrature q(xilab::Kernel::G, 1.0, 100.0, {});
  std::vector<double> xs(128);
  for (int i = 0; i < 128; ++i) xs[i] = i / 127.0;
  const std::vector<double> ys{55.5};
  for (auto _ : state) benchmark::DoNotOptimize(q.uv_grid(xs, ys, 1).size());
}
BENCHMARK(BM_UVGridRow)->Unit(benchmark::kMillisecond);

void BM_EtaOneShot(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(xilab::eta({0.3, 40.0}).value);
}
BENCHMARK(BM_EtaOneShot)->Unit(benchmark::kMillisecond);

void BM_ScanZeros(benchmark::State& state) {
  xilab::LineOptions options;
  options.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(xilab::scan_zeros(0.0, 100.0, 0.5, 1e-10, options).size());
}
BENCHMARK(BM_ScanZeros)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PQ(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(xilab::pq(static_cast<double>(state.range(0))).p);
}
BENCHMARK(BM_PQ)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
