#include <benchmark/benchmark.h>

#include <cmath>

#include "spincat/dynamics.hpp"
#include "spincat/specfun.hpp"
#include "spincat/states.hpp"
#include "spincat/wigner.hpp"

using namespace spincat;
using specfun::HalfInt;

static void BM_Wigner3j(benchmark::State& state) {
    const int tj = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::wigner3j(HalfInt::from_twice(tj), HalfInt::from_twice(tj),
                                                   HalfInt::from_twice(tj), HalfInt::from_twice(2),
                                                   HalfInt::from_twice(-4), HalfInt::from_twice(2)));
    }
}
BENCHMARK(BM_Wigner3j)->Arg(20)->Arg(60)->Arg(120);

static void BM_Wigner3jRow(benchmark::State& state) {
    const int tj = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::wigner3j_row(HalfInt::from_twice(tj),
                                                       HalfInt::from_twice(tj),
                                                       HalfInt::from_twice(2), HalfInt::from_twice(-2)));
    }
}
BENCHMARK(BM_Wigner3jRow)->Arg(100)->Arg(500)->Arg(1000);

static void BM_Legendre(benchmark::State& state) {
    const int k_max = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(specfun::normalized_legendre(k_max, 2, 1.1));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Legendre)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

static void BM_WignerField(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto chi = wigner::characteristic_matrix(states::density_of(states::polar_cat(n)));
    const auto grid = wigner::default_grid(n);
    for (auto _ : state) benchmark::DoNotOptimize(wigner::wigner_field(chi, grid));
}
BENCHMARK(BM_WignerField)->Arg(5)->Arg(20)->Arg(50);

static void BM_CharacteristicMatrix(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto rho = states::density_of(states::nonpolar_cat(n, 0.7));
    for (auto _ : state) benchmark::DoNotOptimize(wigner::characteristic_matrix(rho));
}
BENCHMARK(BM_CharacteristicMatrix)->Arg(10)->Arg(30)->Arg(60);

static void BM_EvolvePolarCat(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(dynamics::evolve_polar_cat(n, dynamics::BathParams{1.0}, 0.0, 101));
}
BENCHMARK(BM_EvolvePolarCat)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_MinSection(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto chi = wigner::characteristic_matrix(states::density_of(states::polar_cat(n)));
    for (auto _ : state) benchmark::DoNotOptimize(wigner::min_section(chi, n));
}
BENCHMARK(BM_MinSection)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
