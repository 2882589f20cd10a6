#include <benchmark/benchmark.h>

#include "clsq/census.hpp"
#include "clsq/quadform.hpp"

using namespace clsq;

static void BM_ComposeReduced(benchmark::State& state) {
    const i64 d = -state.range(0);
    auto forms = enumerate_reduced_definite(d);
    size_t i = 0, j = forms.size() / 2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(compose_to_reduced(forms[i], forms[j]));
        i = (i + 1) % forms.size();
        j = (j + 3) % forms.size();
    }
}
BENCHMARK(BM_ComposeReduced)->Arg(10007)->Arg(999983)->Unit(benchmark::kNanosecond);

static void BM_ClassGroupImaginary(benchmark::State& state) {
    const i64 d = -state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(class_group(d));
}
BENCHMARK(BM_ClassGroupImaginary)->Arg(10007)->Arg(100003)->Unit(benchmark::kMicrosecond);

static void BM_ClassGroupReal(benchmark::State& state) {
    const i64 d = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(class_group(d));
}
BENCHMARK(BM_ClassGroupReal)->Arg(10009)->Arg(100057)->Unit(benchmark::kMicrosecond);

static void BM_ClassGroupCensus(benchmark::State& state) {
    CensusOptions o;
    o.max_disc = state.range(0);
    o.S.primes = {2};
    o.signature = Signature::imaginary;
    for (auto _ : state) benchmark::DoNotOptimize(run_classgroup_census(o));
    state.SetItemsProcessed(state.iterations() * o.max_disc);
}
BENCHMARK(BM_ClassGroupCensus)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_SplittingCensus(benchmark::State& state) {
    CensusOptions o;
    o.max_disc = state.range(0);
    o.S.primes = {2, 3, 5};
    o.signature = Signature::real;
    o.class_groups = false;
    for (auto _ : state) benchmark::DoNotOptimize(run_classgroup_census(o));
    state.SetItemsProcessed(state.iterations() * o.max_disc);
}
BENCHMARK(BM_SplittingCensus)->Arg(1000000)->Arg(10000000)->Unit(benchmark::kMillisecond);
