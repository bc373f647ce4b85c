// OpenMP kernels against their serial reference twins. On a single core the
// pairs should run at about the same speed; set DEMARG_THREADS to compare.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "demarg/demarg.hpp"
#include "demarg/kernels.hpp"
#include "demarg/special.hpp"

using namespace demarg;

namespace {

DensityMatrix bench_state() {
  CVector v = CVector::Zero(12);
  v(0) = 1.0;
  v(3) = cplx(0.5, 0.2);
  v(7) = 0.3;
  return pure_state(v);
}

std::vector<double> axis(int n, double half) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = -half + 2.0 * half * i / (n - 1);
  return g;
}

struct ProductInput {
  QuadratureRule rule;
  std::vector<double> f;
  std::vector<cplx> c;
};

ProductInput product_input(int nodes) {
  ProductInput in{gauss_legendre(nodes, -5.0, 5.0), {}, {}};
  const MarginalDistribution m = marginal_analytic(bench_state(), 0.4);
  for (double x : in.rule.nodes) {
    in.f.push_back(m.density(x));
    in.c.push_back(characteristic(bench_state(), 0.4, x));
  }
  return in;
}

void BM_WignerGrid_Parallel(benchmark::State& st) {
  const DensityMatrix rho = bench_state();
  const auto g = axis(static_cast<int>(st.range(0)), 3.0);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::wigner_grid(rho, g, g));
}

void BM_WignerGrid_Serial(benchmark::State& st) {
  const DensityMatrix rho = bench_state();
  const auto g = axis(static_cast<int>(st.range(0)), 3.0);
  for (auto _ : st) benchmark::DoNotOptimize(kernels::reference::wigner_grid(rho, g, g));
}

void BM_ProjectProduct_Parallel(benchmark::State& st) {
  const ProductInput in = product_input(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::project_product_grid(in.rule, in.f, in.rule, in.f, 9));
}

void BM_ProjectProduct_Serial(benchmark::State& st) {
  const ProductInput in = product_input(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::reference::project_product_grid(in.rule, in.f, in.rule, in.f, 9));
}

void BM_InvertCharacteristic_Parallel(benchmark::State& st) {
  const ProductInput in = product_input(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::invert_characteristic_grid(in.rule, in.c, in.rule, in.c, 9));
}

void BM_InvertCharacteristic_Serial(benchmark::State& st) {
  const ProductInput in = product_input(static_cast<int>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::reference::invert_characteristic_grid(in.rule, in.c, in.rule, in.c, 9));
}

void BM_NegativityScan_Parallel(benchmark::State& st) {
  const DensityMatrix rho = bench_state();
  const auto grid = default_theta_grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(negativity_scan(rho, MapKind::DM1, grid));
}

void BM_NegativityScan_Serial(benchmark::State& st) {
  const DensityMatrix rho = bench_state();
  const auto grid = default_theta_grid(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    double best = 0.0;
    for (double t : grid) best = std::max(best, negativity(dm_analytic(rho, MapKind::DM1, t)));
    benchmark::DoNotOptimize(best);
  }
}

}  // namespace

BENCHMARK(BM_WignerGrid_Parallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WignerGrid_Serial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProjectProduct_Parallel)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProjectProduct_Serial)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InvertCharacteristic_Parallel)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InvertCharacteristic_Serial)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NegativityScan_Parallel)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NegativityScan_Serial)->Arg(60)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  apply_thread_cap_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
