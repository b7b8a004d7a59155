// Serial against OpenMP paths for the heavy kernels. The second argument of
// every benchmark selects the path: 0 serial, 1 parallel.
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "radmax/finite.hpp"
#include "radmax/maximal.hpp"
#include "radmax/weights.hpp"

using namespace radmax;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(1) ? "parallel" : "serial"); }

void BM_NoncenteredMax(benchmark::State& state) {
  const int cells = static_cast<int>(state.range(0));
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> nodes(cells + 1), mass(cells);
  RadialFunction F;
  for (int i = 0; i <= cells; ++i) nodes[i] = static_cast<double>(i) / cells;
  for (int i = 0; i < cells; ++i) {
    mass[i] = std::exp(2.0 * u(rng));
    F.values.push_back(u(rng));
  }
  const auto grid = Grid1D::from_masses(nodes, mass);
  for (auto _ : state) benchmark::DoNotOptimize(noncentered_max(F, grid, exec_of(state)));
  label(state);
}
BENCHMARK(BM_NoncenteredMax)->ArgsProduct({{1024, 4096}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_LatticeOracle(benchmark::State& state) {
  const auto L = Lattice::centered(2, static_cast<int>(state.range(0)), 0.1);
  const auto m = L.masses(RadialDensity::power(0.5));
  std::vector<double> f(L.size());
  for (std::size_t i = 0; i < L.size(); ++i) f[i] = L.norm(i) < 0.8 ? 1.0 : 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(grid_maximal_oracle(L, f, m, exec_of(state)));
  label(state);
}
BENCHMARK(BM_LatticeOracle)->ArgsProduct({{20, 40}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_DoublingProfile(benchmark::State& state) {
  SweepGrid g;
  g.R_count = static_cast<int>(state.range(0));
  g.refinement_depth = 0;
  g.center_multipliers = {0.0, 0.5, 1.0, 2.0};
  const auto w = RadialDensity::shell(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(doubling_profile(w, 50, g, {}, exec_of(state)));
  label(state);
}
BENCHMARK(BM_DoublingProfile)->ArgsProduct({{8}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_BruteMax(benchmark::State& state) {
  const auto S = FiniteMetricMeasureSpace::lattice(2, static_cast<int>(state.range(0)));
  std::vector<double> f(S.size(), 0.0);
  for (std::size_t i = 0; i < S.size(); i += 7) f[i] = 1.0;
  const std::vector<double> radii{1.5, 3.0, 6.0, 12.0};
  for (auto _ : state) benchmark::DoNotOptimize(brute_max(S, radii, f, exec_of(state)));
  label(state);
}
BENCHMARK(BM_BruteMax)->ArgsProduct({{16, 32}, {0, 1}})->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
