// Serial reference loops against their OpenMP counterparts.
// Argument 0 runs Exec::serial, 1 runs Exec::parallel.

#include <benchmark/benchmark.h>

#include "zerocorr/connected.hpp"
#include "zerocorr/covariance.hpp"
#include "zerocorr/gaussian.hpp"
#include "zerocorr/montecarlo.hpp"

namespace {

using namespace zerocorr;

Exec exec_of(const benchmark::State& state) {
    return state.range(0) == 0 ? Exec::serial : Exec::parallel;
}

void BM_PairHistogram(benchmark::State& state) {
    PairRunOptions opts;
    opts.N = 100;
    opts.samples = 64;
    opts.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(empirical_pair_correlation(opts).histogram.counts.data());
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(opts.samples));
}
BENCHMARK(BM_PairHistogram)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DetProductMonteCarlo(benchmark::State& state) {
    const PointConfiguration z({{Complex(0.0)}, {Complex(1.0)}});
    const HermitianMatrix lambda = kron_identity(1, lambda_schur(limit_blocks(z)));
    const DetProductShape shape{2, 1, 1};
    const std::size_t samples = 50000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc_det_product_moment(lambda, shape, samples, 7, exec_of(state)).estimate);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(samples));
}
BENCHMARK(BM_DetProductMonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DecayBound(benchmark::State& state) {
    const PointConfiguration z({{Complex(0.0)}, {Complex(1.0)}, {Complex(0.3, 1.2)}, {Complex(1.5, 0.8)},
                                {Complex(-0.7, 0.9)}});
    for (auto _ : state) benchmark::DoNotOptimize(decay_bound(z, 6, exec_of(state)).value);
}
BENCHMARK(BM_DecayBound)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
