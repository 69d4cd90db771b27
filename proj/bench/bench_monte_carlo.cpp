// Serial reference vs the OpenMP engine on a fractional-moment estimand.

#include <benchmark/benchmark.h>

#include <cmath>

#include "xxzloc/monte_carlo.hpp"
#include "xxzloc/operators.hpp"

using namespace xxzloc;

namespace {

ScalarEstimand green_moment(int sites) {
  const Region r = Region::interval(0, sites - 1);
  const auto basis = make_basis(r, 2);
  return [r, basis](const SampleInfo& s) {
    const auto H = assemble_hamiltonian(basis, {4.0, 8.0}, sample_field(r, {}, s.seed));
    const CVector g = ShiftedSolve(H.matrix(), {0.375, 1e-4}).column(0);
    return std::pow(std::abs(g(g.size() - 1)), 0.3);
  };
}

void BM_Serial(benchmark::State& state) {
  const auto f = green_moment(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_serial(f, 32, 1).mean());
}

void BM_OpenMP(benchmark::State& state) {
  const auto f = green_moment(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo(f, 32, 1).mean());
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OpenMP)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
