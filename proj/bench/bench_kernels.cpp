// Parallel kernels against their serial reference paths.

#include <benchmark/benchmark.h>

#include "qwalk/disorder.hpp"
#include "qwalk/dispersion.hpp"

namespace {

using namespace qwalk;

DisorderSpec case_d(int num_sites)
{
    DisorderSpec spec;
    spec.disorder_case = DisorderCase::D;
    spec.mean_theta1 = pi / 4;
    spec.theta2 = pi / 20;
    spec.lattice = LatticeSpec(num_sites);
    spec.master_seed = 7;
    return spec;
}

void BM_BandScanSerial(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(band_scan_serial(WalkKind::u2_trs, pi / 3, -pi / 12, std::log(1.1),
                                                  static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BandScanSerial)->Arg(1 << 16);

void BM_BandScanParallel(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(
            band_scan(WalkKind::u2_trs, pi / 3, -pi / 12, std::log(1.1), static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BandScanParallel)->Arg(1 << 16);

void BM_ComposeWalk(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const auto field = sample_coin_field(case_d(n), 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(compose_walk(WalkKind::u2_trs, field, std::log(1.1), LatticeSpec(n)));
}
BENCHMARK(BM_ComposeWalk)->Arg(120);

void BM_ComposeWalkReference(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const auto field = sample_coin_field(case_d(n), 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(compose_walk_reference(WalkKind::u2_trs, field, std::log(1.1), LatticeSpec(n)));
}
BENCHMARK(BM_ComposeWalkReference)->Arg(120);

void BM_EnsembleSerial(benchmark::State& state)
{
    const auto spec = case_d(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(run_ensemble_serial(spec, 8));
}
BENCHMARK(BM_EnsembleSerial)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_EnsembleParallel(benchmark::State& state)
{
    const auto spec = case_d(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(run_ensemble(spec, 8));
}
BENCHMARK(BM_EnsembleParallel)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_PhaseMapSerial(benchmark::State& state)
{
    const std::vector<double> axis{-pi / 4, 0.0, pi / 4};
    for (auto _ : state)
        benchmark::DoNotOptimize(phase_map_serial(DisorderCase::D, axis, axis, 4, case_d(16)));
}
BENCHMARK(BM_PhaseMapSerial)->Unit(benchmark::kMillisecond);

void BM_PhaseMapParallel(benchmark::State& state)
{
    const std::vector<double> axis{-pi / 4, 0.0, pi / 4};
    for (auto _ : state)
        benchmark::DoNotOptimize(phase_map(DisorderCase::D, axis, axis, 4, case_d(16)));
}
BENCHMARK(BM_PhaseMapParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
