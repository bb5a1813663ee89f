#include <benchmark/benchmark.h>

#include "strainsense/dynamics.hpp"
#include "strainsense/phase_space.hpp"
#include "strainsense/transmon.hpp"
#include "strainsense/units.hpp"

using namespace strainsense;

static void BM_DisplacementSeries(benchmark::State& state) {
  const phase_space::FockSpace space(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        phase_space::conditional_displacement(0.8, space, phase_space::DisplacementMethod::series));
  }
}
BENCHMARK(BM_DisplacementSeries)->Arg(40)->Arg(60)->Arg(120);

static void BM_DisplacementClosedForm(benchmark::State& state) {
  const phase_space::FockSpace space(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        phase_space::conditional_displacement(0.8, space, phase_space::DisplacementMethod::closed_form));
  }
}
BENCHMARK(BM_DisplacementClosedForm)->Arg(40)->Arg(60)->Arg(120);

static void evolve(benchmark::State& state, dynamics::Representation rep) {
  const int n = static_cast<int>(state.range(0));
  // g0 tau = 0.2 keeps every branch well inside the cutoff.
  const double tau = units::nanoseconds(100.0);
  const auto cp = dynamics::CouplingParams::make(0.2 / tau, units::ghz(5.0), units::ghz(7.0),
                                                 units::mhz(50.0), tau);
  const auto psi = dynamics::JointState::product(
      dynamics::ghz_state(n, rep), phase_space::ResonatorState::vacuum(phase_space::FockSpace(60)));
  for (auto _ : state) benchmark::DoNotOptimize(dynamics::evolve_joint(psi, cp, 0.0));
}

static void BM_EvolveExact(benchmark::State& state) { evolve(state, dynamics::Representation::exact); }
BENCHMARK(BM_EvolveExact)->Arg(2)->Arg(4)->Arg(8);

static void BM_EvolveSymmetric(benchmark::State& state) {
  evolve(state, dynamics::Representation::symmetric);
}
BENCHMARK(BM_EvolveSymmetric)->Arg(2)->Arg(4)->Arg(8);

static void BM_EvolveTwoBranch(benchmark::State& state) {
  evolve(state, dynamics::Representation::ghz_two_branch);
}
BENCHMARK(BM_EvolveTwoBranch)->Arg(2)->Arg(4)->Arg(8);

static void BM_ChargeSpectrum(benchmark::State& state) {
  transmon::TransmonParams p;
  p.e_c = units::ghz(0.25);
  p.e_j0 = units::ghz(12.5);
  p.beta = 100.0;
  p.charge_cutoff = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(transmon::charge_spectrum_exact(p, 0.0));
}
BENCHMARK(BM_ChargeSpectrum)->Arg(15)->Arg(30)->Arg(60);
BENCHMARK_MAIN();
