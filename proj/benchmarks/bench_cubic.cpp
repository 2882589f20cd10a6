#include <benchmark/benchmark.h>

#include "clsq/census.hpp"
#include "clsq/cubic.hpp"

using namespace clsq;

static void BM_EnumerateCubic(benchmark::State& state) {
    const i64 X = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate_cubic_fields(X, Signature::imaginary));
}
BENCHMARK(BM_EnumerateCubic)->Arg(2000)->Arg(20000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_CanonicalCubic(benchmark::State& state) {
    CubicForm f{1, 0, -1, -1};
    f = cubic_shift_x(cubic_swap_xy(cubic_shift_x(f, 3)), -2);
    for (auto _ : state) benchmark::DoNotOptimize(canonical_cubic(f));
}
BENCHMARK(BM_CanonicalCubic)->Unit(benchmark::kNanosecond);

static void BM_CrosscheckHasse(benchmark::State& state) {
    const i64 X = state.range(0);
    CubicTable table(X);
    SConfig S{{2}, std::nullopt};
    for (auto _ : state) benchmark::DoNotOptimize(crosscheck_hasse(X, S, 1, &table));
}
BENCHMARK(BM_CrosscheckHasse)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
