// bench_kernels.cpp - serial vs OpenMP sector assembly and band matvec, plus the steady-state solve

#include "atomonly/sector.hpp"
#include "atomonly/spectral.hpp"

#include <benchmark/benchmark.h>

using namespace atomonly;

namespace {

ModelParams params(long n) {
    ModelParams p;
    p.g_sqrt_n = 0.6;
    p.n_spins = n;
    return p;
}

void BM_BuildSectorSerial(benchmark::State& state) {
    const ModelParams p = params(state.range(0));
    const auto q = compute_q_coefficients(p);
    for (auto _ : state) benchmark::DoNotOptimize(build_sector_serial(p, q, 1, TheoryOrder::Fourth));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BuildSectorParallel(benchmark::State& state) {
    const ModelParams p = params(state.range(0));
    const auto q = compute_q_coefficients(p);
    for (auto _ : state) benchmark::DoNotOptimize(build_sector(p, q, 1, TheoryOrder::Fourth));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_Apply(benchmark::State& state) {
    const ModelParams p = params(state.range(0));
    const auto s = build_sector(p, compute_q_coefficients(p), 1, TheoryOrder::Fourth);
    const Eigen::VectorXcd x = Eigen::VectorXcd::Random(s.dim());
    for (auto _ : state) {
        if constexpr (Parallel)
            benchmark::DoNotOptimize(s.apply(x));
        else
            benchmark::DoNotOptimize(s.apply_serial(x));
    }
    state.SetItemsProcessed(state.iterations() * s.dim());
}

void BM_SteadyState(benchmark::State& state) {
    const ModelParams p = params(state.range(0));
    const auto s = build_sector(p, compute_q_coefficients(p), 0, TheoryOrder::Fourth);
    for (auto _ : state) benchmark::DoNotOptimize(steady_state(s));
}

} // namespace

BENCHMARK(BM_BuildSectorSerial)->RangeMultiplier(10)->Range(10000, 1000000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BuildSectorParallel)->RangeMultiplier(10)->Range(10000, 1000000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Apply<false>)->Name("BM_ApplySerial")->RangeMultiplier(10)->Range(10000, 1000000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Apply<true>)->Name("BM_ApplyParallel")->RangeMultiplier(10)->Range(10000, 1000000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SteadyState)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
