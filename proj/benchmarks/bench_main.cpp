#include <benchmark/benchmark.h>

#include "lpbm/body.hpp"
#include "lpbm/direction.hpp"
#include "lpbm/functionals.hpp"
#include "lpbm/gallery.hpp"

namespace {

using namespace lpbm;

// Support evaluation is the inner loop of everything else, so track it per
// representation.  Directions cycle through a fixed grid to defeat caching
// of a single ray.

void bm_support_polytope(benchmark::State& state) {
    ConvexBody K = random_polytope(3, 40, RngStream{1});
    auto grid = DirectionSet::sphere(642);
    int i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(K.support(grid->dir(i)));
        i = (i + 1) % grid->size();
    }
}
BENCHMARK(bm_support_polytope);

void bm_support_ellipsoid(benchmark::State& state) {
    Vec axes(3);
    axes << 1.0, 1.35, 0.75;
    ConvexBody K = make_ellipsoid(axes);
    auto grid = DirectionSet::sphere(642);
    int i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(K.support(grid->dir(i)));
        i = (i + 1) % grid->size();
    }
}
BENCHMARK(bm_support_ellipsoid);

void bm_support_lp_combination(benchmark::State& state) {
    ConvexBody K = make_cube(3, 0.5);
    ConvexBody L = make_ball(3, 1.0);
    ConvexBody S = lp_combine(2.0, 0.5, K, 0.5, L);
    auto grid = DirectionSet::sphere(642);
    int i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(S.support(grid->dir(i)));
        i = (i + 1) % grid->size();
    }
}
BENCHMARK(bm_support_lp_combination);

void bm_support_sampled(benchmark::State& state) {
    auto grid = DirectionSet::sphere(2562);
    ConvexBody base = make_ball(3, 1.0);
    Vec h(grid->size());
    for (int k = 0; k < grid->size(); ++k) {
        h[k] = base.support(grid->dir(k));
    }
    ConvexBody K = ConvexBody::support_sampled(grid, h);
    auto probes = DirectionSet::sphere(642);
    int i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(K.support(probes->dir(i)));
        i = (i + 1) % probes->size();
    }
}
BENCHMARK(bm_support_sampled);

// sphere() builds a fresh grid every call (only standard() memoizes), so
// this is the cold cost: geodesic subdivision plus the mesh index.
void bm_sphere_grid_build(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto fresh = DirectionSet::sphere(n);
        benchmark::DoNotOptimize(fresh->size());
    }
}
BENCHMARK(bm_sphere_grid_build)->Arg(642)->Arg(2562);

void bm_volume_lazy_combination(benchmark::State& state) {
    ConvexBody K = make_cube(3, 0.5);
    ConvexBody L = make_ball(3, 1.0);
    ConvexBody S = lp_combine(2.0, 0.5, K, 0.5, L);
    for (auto _ : state) {
        benchmark::DoNotOptimize(volume(S));
    }
}
BENCHMARK(bm_volume_lazy_combination);

void bm_quermassintegral_mc(benchmark::State& state) {
    ConvexBody K = make_cube(3, 0.5);
    ConvexBody L = make_ball(3, 1.0);
    ConvexBody S = lp_combine(2.0, 0.5, K, 0.5, L);
    ProjectionMeanOptions opt;
    opt.samples = static_cast<int>(state.range(0));
    std::uint64_t run = 0;
    for (auto _ : state) {
        Estimate e = quermassintegral(S, 1, RngStream{run++}, opt);
        benchmark::DoNotOptimize(e.value);
    }
}
BENCHMARK(bm_quermassintegral_mc)->Arg(128)->Arg(512);

void bm_capacity_walkers(benchmark::State& state) {
    ConvexBody K = make_cube(3, 0.5);
    CapacityOptions opt;
    opt.walkers = state.range(0);
    std::uint64_t run = 0;
    for (auto _ : state) {
        Estimate e = capacity_newtonian(K, RngStream{run++}, opt);
        benchmark::DoNotOptimize(e.value);
    }
}
BENCHMARK(bm_capacity_walkers)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
