#include <benchmark/benchmark.h>

#include "dicke/exact.hpp"
#include "dicke/hamiltonian.hpp"
#include "dicke/semiclassical.hpp"

using namespace dicke;

static void BM_BuildHamiltonian(benchmark::State& state) {
  const int n_atoms = static_cast<int>(state.range(0));
  const ModelParams p(n_atoms, 1.0, 1.0);
  const ParityBasis basis = build_basis(p, 128, Sector::even);
  for (auto _ : state) benchmark::DoNotOptimize(build_hamiltonian(p, basis));
  state.counters["dim"] = static_cast<double>(basis.size());
}
BENCHMARK(BM_BuildHamiltonian)->Arg(20)->Arg(60)->Unit(benchmark::kMicrosecond);

static void BM_SectorGroundState(benchmark::State& state) {
  const int n_atoms = static_cast<int>(state.range(0));
  const int n_max = static_cast<int>(state.range(1));
  const ModelParams p(n_atoms, 1.0, 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(sector_ground_state(p, n_max, Parity::even).energy());
}
BENCHMARK(BM_SectorGroundState)->Args({20, 64})->Args({60, 128})->Unit(benchmark::kMillisecond);

static void BM_SasEnergy(benchmark::State& state) {
  const ModelParams p(static_cast<int>(state.range(0)), 1.0, 0.55);
  const PhasePoint x{-1.0, 0.0, 0.3, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(sas_energy(p, x, Parity::even));
}
BENCHMARK(BM_SasEnergy)->Arg(20)->Arg(10000);

static void BM_SasMinimize(benchmark::State& state) {
  const ModelParams p(20, 1.0, 0.55);
  for (auto _ : state) benchmark::DoNotOptimize(sas_minimize(p, Parity::even).energy);
}
BENCHMARK(BM_SasMinimize)->Unit(benchmark::kMillisecond);

static void BM_SasJump(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sas_jump_gamma(20, 1.0, 0.5, 0.75, 1e-4));
}
BENCHMARK(BM_SasJump)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
