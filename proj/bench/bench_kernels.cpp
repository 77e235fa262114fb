// Serial reference vs OpenMP kernels. Arg(0) is serial, Arg(1) parallel.

#include <benchmark/benchmark.h>

#include <cmath>

#include "wkbq/gauss_legendre.hpp"
#include "wkbq/oracle.hpp"
#include "wkbq/quadrature.hpp"
#include "wkbq/tridiagonal.hpp"
#include "wkbq/wkb.hpp"

using namespace wkbq;

namespace {

const UnitSystem kAtomic = UnitSystem::from_beta(1.0 / std::sqrt(2.0));

Execution exec_of(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void BM_GaussLegendre(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(compute_gauss_legendre(static_cast<int>(state.range(1)), exec_of(state)));
}
BENCHMARK(BM_GaussLegendre)->ArgsProduct({{0, 1}, {256, 2048}})->Unit(benchmark::kMillisecond);

void BM_JIntegral(benchmark::State& state) {
    const Potential p = make_builtin(builtin::GaussianWell{2.0, 1.0}, kAtomic);
    const int nodes = static_cast<int>(state.range(1));
    gauss_legendre(nodes);  // fill the shared rule cache outside the timed loop
    for (auto _ : state) benchmark::DoNotOptimize(j_integral_fixed(p, -0.8, nodes, exec_of(state)));
}
BENCHMARK(BM_JIntegral)->ArgsProduct({{0, 1}, {1024, 4096}});

void BM_Delta1(benchmark::State& state) {
    const Potential p = make_builtin(builtin::Quartic{1.0}, kAtomic);
    const QuadConfig cfg{};
    for (auto _ : state) benchmark::DoNotOptimize(delta1(p, 5.0, cfg, kAtomic, exec_of(state)));
}
BENCHMARK(BM_Delta1)->Arg(0)->Arg(1);

void BM_Spectrum(benchmark::State& state) {
    const Potential p = make_builtin(builtin::Quartic{1.0}, kAtomic);
    const QuadConfig cfg{};
    for (auto _ : state)
        benchmark::DoNotOptimize(
            solve_spectrum(p, QuantizationMode::resummed, cfg, kAtomic, SpectrumRequest{0, 15}, exec_of(state)));
}
BENCHMARK(BM_Spectrum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SturmEigenvalues(benchmark::State& state) {
    const int n = static_cast<int>(state.range(1));
    SymTridiagonal m;
    for (int i = 0; i < n; ++i) m.diag.push_back(2.0 + std::sin(0.01 * i));
    m.off.assign(n - 1, -1.0);
    for (auto _ : state) benchmark::DoNotOptimize(lowest_eigenvalues(m, 16, exec_of(state)));
}
BENCHMARK(BM_SturmEigenvalues)->ArgsProduct({{0, 1}, {20000, 200000}})->Unit(benchmark::kMillisecond);

void BM_OracleGrid(benchmark::State& state) {
    const Potential p = make_builtin(builtin::Harmonic{1.0}, kAtomic);
    const GridConfig grid{-10.0, 10.0, 8000, 2};
    for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_grid(p, grid, 10, kAtomic, exec_of(state)));
}
BENCHMARK(BM_OracleGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
