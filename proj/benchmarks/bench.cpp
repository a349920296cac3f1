#include <benchmark/benchmark.h>

#include "rt/detclass.hpp"
#include "rt/fixtures.hpp"
#include "rt/random.hpp"
#include "rt/witten.hpp"

using namespace rt;

static void BM_Torsion(benchmark::State& state) {
    Rng rng(1);
    const CochainComplex c = random_acyclic(Group::cyclic(static_cast<int>(state.range(0))), 4, 3, rng, true);
    for (auto _ : state) benchmark::DoNotOptimize(torsion(c));
}
BENCHMARK(BM_Torsion)->Arg(1)->Arg(4)->Arg(8)->Arg(16);

static void BM_ConeTorsion(benchmark::State& state) {
    Rng rng(2);
    const CochainComplex c = random_acyclic(Group::cyclic(static_cast<int>(state.range(0))), 4, 3, rng, true);
    const Morphism f = random_isomorphism(c, rng, true);
    for (auto _ : state) benchmark::DoNotOptimize(cone_torsion(f));
}
BENCHMARK(BM_ConeTorsion)->Arg(1)->Arg(4)->Arg(8);

static void BM_CircleTorsion(benchmark::State& state) {
    const Representation rho = circle_representation(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(combinatorial_torsion(circle(), rho));
}
BENCHMARK(BM_CircleTorsion)->Arg(5)->Arg(32)->Arg(64);

static void BM_WittenSweep(benchmark::State& state) {
    const Representation rho = circle_representation(3);
    const SubdivisionData s = circle_subdivision(4, {0});
    const Morphism a = subdivision_map(s, rho, {});
    const HeightOperator h = height_operator(s.fine, circle_heights(4), rho.backend(), 1);
    const std::vector<double> grid = {0, 1, 2, 3, 4, 5};
    for (auto _ : state) benchmark::DoNotOptimize(witten_sweep(a, h, grid, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_WittenSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_DetclassSweep(benchmark::State& state) {
    const std::vector<int> grids = {1024, 4096, 16384, 65536};
    for (auto _ : state)
        benchmark::DoNotOptimize(detclass_sweep({"circle_symbol", 1.0}, grids, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_DetclassSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
