// Timing of the hot paths: harmonic transforms, surface geometry, kernel
// assembly, the capacity solve and a full energy evaluation.
#include <benchmark/benchmark.h>

#include <random>

#include "chargedrop/energy.hpp"
#include "chargedrop/riesz_capacity.hpp"
#include "chargedrop/set_builders.hpp"
#include "chargedrop/smoothing.hpp"
#include "chargedrop/surface_geometry.hpp"

using namespace chargedrop;

namespace {

sphere::SphereField random_shape(int band_limit) {
  const auto g = sphere::SphereGrid::create(band_limit);
  std::mt19937_64 rng(1);
  sphere::RandomFieldOptions o;
  o.max_degree = band_limit;
  o.target = 0.2;
  return sphere::random_field(g, rng, o);
}

capacity::DiscretizedSet sphere_panels(std::size_t n) {
  return capacity::boundary_panels(capacity::ring_partition(n), capacity::zonal_surface([](double, double& R, double& dR) {
                                     R = 1.0;
                                     dR = 0.0;
                                   }));
}

void BM_HarmonicAnalysis(benchmark::State& state) {
  const auto phi = random_shape(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sphere::sh_analyze(*phi.grid(), phi.values()));
}
BENCHMARK(BM_HarmonicAnalysis)->Arg(8)->Arg(16)->Arg(32);

void BM_HarmonicDerivatives(benchmark::State& state) {
  const auto phi = random_shape(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sphere::sh_derivatives(*phi.grid(), phi.coeffs()));
}
BENCHMARK(BM_HarmonicDerivatives)->Arg(8)->Arg(16)->Arg(32);

void BM_SurfaceGeometry(benchmark::State& state) {
  const auto phi = random_shape(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sphere::bending_energies(sphere::surface_from_field(phi, 1.0)));
}
BENCHMARK(BM_SurfaceGeometry)->Arg(8)->Arg(16)->Arg(32);

void BM_KernelAssembly(benchmark::State& state) {
  const auto set = sphere_panels(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(capacity::assemble_kernel(set, {3, 2.0, 0.0}));
}
BENCHMARK(BM_KernelAssembly)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_EquilibriumSolve(benchmark::State& state) {
  const auto set = sphere_panels(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(capacity::equilibrium_measure(set, {3, 2.0, 0.0}).value);
}
BENCHMARK(BM_EquilibriumSolve)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_EnergyEvaluate(benchmark::State& state) {
  const auto phi = random_shape(6);
  energy::ModelParams p;
  p.charge = 1.0;
  energy::CapacityDiscretization d;
  d.panels = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(energy::evaluate(phi, 1.0, p, d).total_relaxed);
}
BENCHMARK(BM_EnergyEvaluate)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_DiskCells(benchmark::State& state) {
  const curve::CurveShape disk(8, 256, 1.0);
  const auto set = capacity::disk_cells(disk, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(capacity::equilibrium_measure(set, {2, 1.5, 0.0}).value);
}
BENCHMARK(BM_DiskCells)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_MollifyPoint(benchmark::State& state) {
  const auto g = sphere::SphereGrid::create(8, 1);
  const auto psi = smoothing::ParametrizedMap::from_function(g, [](const sphere::Vec3& x) { return x; });
  for (auto _ : state) benchmark::DoNotOptimize(smoothing::mollified_value(psi, 0.1, sphere::Vec3(0, 0.6, 0.8), 8));
}
BENCHMARK(BM_MollifyPoint);

}  // namespace

// The packaged benchmark_main archive carries LTO bytecode from another compiler
// release, so the entry point is defined here.
BENCHMARK_MAIN();
