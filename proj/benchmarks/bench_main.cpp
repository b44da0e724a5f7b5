#include <benchmark/benchmark.h>

#include <map>

#include "penrose/corrector.hpp"
#include "penrose/walk.hpp"

using namespace penrose;

namespace {

GridParams regular_params(uint64_t seed, double radius) {
    for (uint64_t s = seed;; ++s) {
        const GridParams p = sample_environment(s);
        if (regularity_check(p, radius + 3.0)) return p;
    }
}

const Patch& cached_patch(double radius) {
    static std::map<double, Patch> cache;
    auto it = cache.find(radius);
    if (it == cache.end()) {
        it = cache.emplace(radius, build_patch(regular_params(42, radius + 3.0), radius)).first;
    }
    return it->second;
}

const PenroseGraph& cached_graph(double radius) {
    static std::map<double, PenroseGraph> cache;
    auto it = cache.find(radius);
    if (it == cache.end()) it = cache.emplace(radius, build_graph(cached_patch(radius))).first;
    return it->second;
}

void BM_BuildPatch(benchmark::State& state) {
    const auto radius = static_cast<double>(state.range(0));
    const GridParams params = regular_params(42, radius + 3.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_patch(params, radius));
    }
    state.counters["tiles"] = static_cast<double>(cached_patch(radius).tiles.size());
}
BENCHMARK(BM_BuildPatch)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

void BM_BuildGraph(benchmark::State& state) {
    const auto radius = static_cast<double>(state.range(0));
    const Patch& patch = cached_patch(radius);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_graph(patch));
    }
}
BENCHMARK(BM_BuildGraph)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

void BM_SolveHarmonic(benchmark::State& state) {
    const auto radius = static_cast<double>(state.range(0));
    const PenroseGraph& g = cached_graph(radius);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_harmonic(g));
    }
}
BENCHMARK(BM_SolveHarmonic)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

void BM_WalkSteps(benchmark::State& state) {
    const PenroseGraph& g = cached_graph(150.0);
    const int n = static_cast<int>(state.range(0));
    uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(g, n, seed++));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_WalkSteps)->Arg(500)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
