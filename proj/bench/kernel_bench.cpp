// Serial reference path against the OpenMP path for the heavier kernels.
// Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "semijulia/analysis.hpp"
#include "semijulia/checkers.hpp"
#include "semijulia/fiberedpoly.hpp"
#include "semijulia/julia.hpp"

using namespace semijulia;

namespace {

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

RationalMap poly(std::initializer_list<cplx> c) { return RationalMap::polynomial(Polynomial(c)); }

const GeneratorSystem& pm() {
  static const GeneratorSystem G{poly({2.0, 0.0, 1.0}), poly({-2.0, 0.0, 1.0})};
  return G;
}

const PointCloud& cloud() {
  static const PointCloud c = backward_orbit_cloud(pm(), 200000, 100, 1);
  return c;
}

void BM_BackwardOrbit(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(backward_orbit_cloud(pm(), 200000, 100, 1, mode(s)));
}

void BM_Rasterize(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(rasterize(cloud(), Box::square(2.5), 2048, 2048, mode(s)));
}

void BM_ResolutionScale(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(resolution_scale(cloud(), mode(s)));
}

void BM_CheckOsc(benchmark::State& s) {
  const auto U = RegionSpec::disk(0.0, 2.0);
  for (auto _ : s) benchmark::DoNotOptimize(check_osc(pm(), U, 200, {}, mode(s)));
}

void BM_DistanceTransform(benchmark::State& s) {
  const auto r = rasterize(cloud(), Box::square(2.5), 2048, 2048).raster;
  for (auto _ : s) benchmark::DoNotOptimize(distance_to_occupied(r, mode(s)));
}

void BM_Porosity(benchmark::State& s) {
  const auto r = rasterize(cloud(), Box::square(2.5), 2048, 2048).raster;
  for (auto _ : s) benchmark::DoNotOptimize(porosity_estimate(r, {0.05, 0.1, 0.2}, 128, mode(s)));
}

void BM_Poincare(benchmark::State& s) {
  const std::vector<double> grid{0.5, 1.0, 1.5, 2.0};
  for (auto _ : s) benchmark::DoNotOptimize(poincare_series(pm(), ExtComplex(0.3, 1.7), grid, 10, {}, mode(s)));
}

void BM_BasinMask(benchmark::State& s) {
  const Word x = Word::periodic({0, 1}, 60);
  for (auto _ : s)
    benchmark::DoNotOptimize(basin_mask(pm(), x, Box::square(2.5), 512, 512, escape_radius(pm()), 60, mode(s)));
}

}  // namespace

BENCHMARK(BM_BackwardOrbit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Rasterize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResolutionScale)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckOsc)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistanceTransform)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Porosity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Poincare)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BasinMask)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
