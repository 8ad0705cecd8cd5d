#include <benchmark/benchmark.h>

#include <cmath>

#include "pccool/analytic.hpp"
#include "pccool/density_matrix.hpp"
#include "pccool/lindblad.hpp"
#include "pccool/sweep.hpp"

namespace {

pccool::PhysicalParams resonance() {
  return {5.0, 2.0 * std::sqrt(11.0), 12.0, 0.1, 1.0, 1.0, 1.0};
}

void BM_ClosedFormPhonon(benchmark::State& state) {
  const auto p = resonance();
  for (auto _ : state) benchmark::DoNotOptimize(pccool::steady_phonon(p));
}
BENCHMARK(BM_ClosedFormPhonon);

void BM_BuildLiouvillian(benchmark::State& state) {
  const auto p = resonance();
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pccool::build_liouvillian(p, n_max));
}
BENCHMARK(BM_BuildLiouvillian)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_SteadyState(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  const auto L = pccool::build_liouvillian(resonance(), n_max);
  for (auto _ : state) benchmark::DoNotOptimize(pccool::steady_state(L));
}
BENCHMARK(BM_SteadyState)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_EvolveShort(benchmark::State& state) {
  const auto L = pccool::build_liouvillian(resonance(), 8);
  const auto rho0 = pccool::DensityMatrix::product(
      pccool::DensityMatrix::atom_from_dressed(-1.0, 0.0),
      pccool::DensityMatrix::fock_populations(8, 1));
  pccool::EvolveOptions o;
  o.track_positivity = false;
  for (auto _ : state) benchmark::DoNotOptimize(pccool::evolve(L, rho0, 1.0, 11, o));
}
BENCHMARK(BM_EvolveShort)->Unit(benchmark::kMillisecond);

void BM_Fig1Sweep(benchmark::State& state) {
  const auto preset = pccool::find_preset("fig1");
  for (auto _ : state) {
    for (const auto& spec : preset.curves) {
      benchmark::DoNotOptimize(pccool::run_sweep(spec, pccool::Execution::kSerial));
    }
  }
}
BENCHMARK(BM_Fig1Sweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
