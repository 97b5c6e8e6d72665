#include <random>

#include <benchmark/benchmark.h>

#include "dvs/harness.hpp"
#include "dvs/mote.hpp"
#include "dvs/oracle.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

dvs::ExperimentConfig bench_config(int systems) {
    dvs::ExperimentConfig cfg;
    cfg.systems = systems;
    cfg.gen.seed = 11;
    return cfg;
}

void BM_ComparisonSerial(benchmark::State& state) {
    const auto cfg = bench_config(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(dvs::run_comparison_serial(cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ComparisonParallel(benchmark::State& state) {
    const auto cfg = bench_config(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(dvs::run_comparison(cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
#ifdef _OPENMP
    state.counters["threads"] = omp_get_max_threads();
#endif
}

dvs::ContentionView synthetic_view(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> units(1, 1000);
    dvs::ContentionView view;
    view.now = dvs::Rational(500);
    view.m = static_cast<int>(n / 2);
    view.subject = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const dvs::Rational period(units(rng));
        const dvs::Rational last = view.now - dvs::Rational(units(rng) % 200);
        view.tasks.push_back({last, period, period / dvs::Rational(2), dvs::Rational(i % 3)});
    }
    return view;
}

void BM_NextContention(benchmark::State& state) {
    const auto view = synthetic_view(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(dvs::next_contention(view));
    state.SetComplexityN(state.range(0));
}

void BM_BruteForceTnext(benchmark::State& state) {
    const auto view = synthetic_view(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(dvs::brute_force_tnext(view));
    state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_ComparisonSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ComparisonParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NextContention)->RangeMultiplier(10)->Range(10, 10000)->Complexity(benchmark::oNLogN);
BENCHMARK(BM_BruteForceTnext)->RangeMultiplier(10)->Range(10, 1000)->Complexity(benchmark::oNSquared);

BENCHMARK_MAIN();
