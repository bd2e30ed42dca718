#include <benchmark/benchmark.h>

#include "husimi/continuum.hpp"
#include "husimi/lattice.hpp"
#include "husimi/model.hpp"
#include "husimi/semiclassical.hpp"

namespace {

constexpr double kGolden = 0.6180339887498949;

void BM_FlowField(benchmark::State& state) {
  const auto m = husimi::ModelParams::model_i(1.0, 0.5, 0.4, kGolden);
  double q = 0.3, p = -0.7;
  for (auto _ : state) {
    const auto u = husimi::flow_field(m, {q, p});
    benchmark::DoNotOptimize(u);
    q += 1e-9;  // defeat constant folding
  }
}
BENCHMARK(BM_FlowField);

void BM_BackwardCharacteristic(benchmark::State& state) {
  const auto m = husimi::ModelParams::model_i(1.0, 0.5, 0.4, kGolden);
  for (auto _ : state) {
    const auto res = husimi::backward_characteristic(m, {0.4, 0.9}, 1.0, 1e-3);
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(BM_BackwardCharacteristic);

void BM_LatticeStep(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto m = husimi::ModelParams::model_i(1.0, 0.5, 0.5, kGolden);
  const auto H = husimi::build_lattice_hamiltonian(m, L);
  const auto psi0 = husimi::coherent_initial_state(L);
  for (auto _ : state) {
    const auto snaps = husimi::evolve_lattice(H, psi0, 1.0, 0.01, {1.0});
    benchmark::DoNotOptimize(snaps);
  }
}
BENCHMARK(BM_LatticeStep)->Arg(201)->Arg(601);

void BM_HusimiGrid(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(N);
  psi(0) = 1.0;
  const husimi::PhaseSpaceGrid grid(-20, 20, -8, 8, 101, 51);
  for (auto _ : state) {
    const auto field = husimi::quantum_husimi(psi, grid, 0.0);
    benchmark::DoNotOptimize(field);
  }
}
BENCHMARK(BM_HusimiGrid)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
