// Serial vs OpenMP timings for the three parallel kernels.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "subharmonic/melnikov.hpp"
#include "subharmonic/strobo_map.hpp"
#include "subharmonic/unperturbed.hpp"

using namespace subharmonic;

namespace {

const ResonanceSpec& third() {
  static const ResonanceSpec spec = resonance_from_level(1.6, 3, 1);
  return spec;
}

std::vector<double> level_grid(int points) {
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) grid.push_back(0.05 + 1.9 * i / (points - 1));
  return grid;
}

template <bool Parallel>
void BM_Scan(benchmark::State& state) {
  const SystemSpec sys{ForcingSpec::sine(third().omega), 0.2};
  const auto seeds = seed_line(PlanarState(0, 0.8), PlanarState(0, 2.4), static_cast<int>(state.range(0)));
  const ScanOptions opts{100, 10.0};
  for (auto _ : state) {
    auto r = Parallel ? scan(seeds, 0.0, sys, third().T, opts) : scan_serial(seeds, 0.0, sys, third().T, opts);
    benchmark::DoNotOptimize(r.data());
  }
}

template <bool Parallel>
void BM_MelnikovProfile(benchmark::State& state) {
  const ForcingSpec g(third().omega, {{1.0, 1, PhaseKind::Sine}, {4.0, 2, PhaseKind::Cosine}});
  const int samples = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto p = Parallel ? melnikov_profile(PlanarState(0, 1.6), third(), g, samples)
                      : melnikov_profile_serial(PlanarState(0, 1.6), third(), g, samples);
    benchmark::DoNotOptimize(p.samples.data());
  }
}

template <bool Parallel>
void BM_PeriodCurve(benchmark::State& state) {
  const auto grid = level_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto rows = Parallel ? period_curve(grid) : period_curve_serial(grid);
    benchmark::DoNotOptimize(rows.data());
  }
}

}  // namespace

BENCHMARK(BM_Scan<false>)->Name("scan/serial")->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Scan<true>)->Name("scan/parallel")->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MelnikovProfile<false>)->Name("melnikov_profile/serial")->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MelnikovProfile<true>)->Name("melnikov_profile/parallel")->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PeriodCurve<false>)->Name("period_curve/serial")->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PeriodCurve<true>)->Name("period_curve/parallel")->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
