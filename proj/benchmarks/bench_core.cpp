#include <complex>

#include <benchmark/benchmark.h>

#include <rbm/rbm.hpp>

namespace {

const rbm::ModelParams kGeneric{2.0, 0.5, 1.0, -1.0, -0.7, 1.0, 0.3, 0.6, 1.2};

void BM_BuildPath(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rbm::build_path(kGeneric));
}
BENCHMARK(BM_BuildPath);

void BM_BoundaryTransformSetup(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rbm::BoundaryTransform(kGeneric));
}
BENCHMARK(BM_BoundaryTransformSetup);

void BM_Phi1Eval(benchmark::State& state) {
  const rbm::BoundaryTransform bt(kGeneric);
  const std::complex<double> z(-0.7, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(bt.eval(z));
}
BENCHMARK(BM_Phi1Eval);

void BM_Phi1Continuation(benchmark::State& state) {
  const rbm::StationaryLaplace L(kGeneric);
  for (auto _ : state) benchmark::DoNotOptimize(L.phi1_continuation(-0.3));
}
BENCHMARK(BM_Phi1Continuation);

void BM_ChebyshevExponential(benchmark::State& state) {
  const std::complex<double> x(0.3, 1.7);
  for (auto _ : state) benchmark::DoNotOptimize(rbm::chebyshev_T(2.7, x));
}
BENCHMARK(BM_ChebyshevExponential);

void BM_SimulateSmall(benchmark::State& state) {
  rbm::SimConfig cfg;
  cfg.step_h = 1e-3;
  cfg.burn_in = 5.0;
  cfg.horizon_T = 6.0;
  cfg.n_paths = static_cast<std::size_t>(state.range(0));
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(rbm::simulate(kGeneric, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 6000);
}
BENCHMARK(BM_SimulateSmall)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
