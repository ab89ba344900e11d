#include <benchmark/benchmark.h>

#include "canonsys/prufer.hpp"
#include "canonsys/random_potential.hpp"
#include "canonsys/sweep.hpp"

using namespace canonsys;

namespace {

const PotentialSpec& spec() {
  static const PotentialSpec s = random_potential(42);
  return s;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto lambdas = linspace(-10.0, 10.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(discriminant_sweep_serial(spec(), lambdas, false));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto lambdas = linspace(-10.0, 10.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(discriminant_sweep(spec(), lambdas, false));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DirichletSerial(benchmark::State& state) {
  const long n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(dirichlet_eigenvalues_serial(spec(), DirichletKind::Mu, -n, n));
}

void BM_DirichletParallel(benchmark::State& state) {
  const long n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(dirichlet_eigenvalues(spec(), DirichletKind::Mu, -n, n));
}

void BM_MuCurveSerial(benchmark::State& state) {
  const auto taus = tau_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(shifted_mu_curve_serial(spec(), 2, taus));
}

void BM_MuCurveParallel(benchmark::State& state) {
  const auto taus = tau_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(shifted_mu_curve(spec(), 2, taus));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DirichletSerial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DirichletParallel)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MuCurveSerial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MuCurveParallel)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
