#include <benchmark/benchmark.h>

#include <cmath>

#include "volrough/cf_spanning.hpp"
#include "volrough/chain_synth.hpp"
#include "volrough/hurst_est.hpp"
#include "volrough/riccati_cf.hpp"

using namespace volrough;

namespace {

const RoughHestonParams kDesk{std::log(3000.0), 0.03, 0.5, -0.9, 0.25};
const double kShort = 3.0 / 252.0;

void BM_SolveH(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const AdamsKernel kernel(kDesk.hurst + 0.5, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_h(9.0, kDesk, kShort, kernel).frac_integral);
    }
}
BENCHMARK(BM_SolveH)->Arg(512)->Arg(2048)->Arg(8192);

void BM_Cf(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(cf(1.0 / std::sqrt(kShort), kDesk, kShort));
    }
}
BENCHMARK(BM_Cf);

void BM_PricerConstruction(benchmark::State& state) {
    for (auto _ : state) {
        FourierPricer pricer(kDesk, kShort);
        benchmark::DoNotOptimize(pricer.otm(kDesk.x0));
    }
}
BENCHMARK(BM_PricerConstruction)->Unit(benchmark::kMillisecond);

void BM_SpanningCf(benchmark::State& state) {
    const auto chain = generate_chain(kDesk, kShort);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spanning_cf(chain, 2.0));
    }
    state.counters["strikes"] = static_cast<double>(chain.size());
}
BENCHMARK(BM_SpanningCf);

void BM_EstimateH(benchmark::State& state) {
    const auto c1 = add_noise(generate_chain(kDesk, kShort), NoiseModel{0.025, 1, 0});
    const auto c2 = add_noise(generate_chain(kDesk, 2 * kShort), NoiseModel{0.025, 1, 1});
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_h(c1, c2).value);
    }
}
BENCHMARK(BM_EstimateH)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
