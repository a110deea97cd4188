#include <benchmark/benchmark.h>

#include <vector>

#include "dlab/harness.hpp"
#include "dlab/operators.hpp"
#include "dlab/phases.hpp"
#include "dlab/specfun.hpp"
#include "dlab/subordination.hpp"
#include "dlab/window.hpp"

namespace {

void BM_HermiteAll(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  std::vector<double> out;
  double x = 0.3;
  for (auto _ : state) {
    dlab::hermite_all(K, x, out);
    benchmark::DoNotOptimize(out.data());
    x += 1e-9;
  }
  state.SetItemsProcessed(state.iterations() * (K + 1));
}
BENCHMARK(BM_HermiteAll)->Arg(200)->Arg(2000);

void BM_LaguerreFnAll(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dlab::laguerre_fn_all(K, 0.5, 7.0));
  state.SetItemsProcessed(state.iterations() * (K + 1));
}
BENCHMARK(BM_LaguerreFnAll)->Arg(200)->Arg(2000);

void BM_BesselI(benchmark::State& state) {
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dlab::bessel_i(2.25, x));
    x = x < 200.0 ? x * 1.1 : 0.5;
  }
}
BENCHMARK(BM_BesselI);

void BM_SupnormCell(benchmark::State& state) {
  const dlab::ModelOperator op = state.range(0) == 0 ? dlab::ModelOperator::hermite(2) : dlab::ModelOperator::twisted(1);
  const dlab::PhaseFunction ph = dlab::klein_gordon_phase();
  const dlab::FrequencyWindow w = dlab::FrequencyWindow::standard();
  for (auto _ : state) {
    benchmark::DoNotOptimize(dlab::localized_propagator_supnorm(op, ph, w, 8.0, 0.2).value);
  }
}
BENCHMARK(BM_SupnormCell)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SymbolGrid(benchmark::State& state) {
  const dlab::PhaseFunction ph = dlab::klein_gordon_phase();
  const dlab::Profile g = dlab::default_profile();
  const double lambda = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dlab::fourier_symbol_grid(ph, g, 0.5, lambda, -20.0, 20.0, 0.05).values.data());
  }
}
BENCHMARK(BM_SymbolGrid)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
