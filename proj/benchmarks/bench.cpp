#include <benchmark/benchmark.h>

#include "lesieve/gwp.hpp"
#include "lesieve/pointproc.hpp"
#include "lesieve/sieve.hpp"
#include "lesieve/stats.hpp"

using namespace lesieve;

static void BM_SampleGeometric(benchmark::State& state) {
    IncrementLaw law = IncrementLaw::geometric(0.5);
    RandomStream rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(law.sample(rng));
}
BENCHMARK(BM_SampleGeometric);

static void BM_SampleSibuya(benchmark::State& state) {
    IncrementLaw law = IncrementLaw::sibuya(0.5);
    RandomStream rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(law.sample(rng));
}
BENCHMARK(BM_SampleSibuya);

static void BM_SampleSibuyaBernoulli(benchmark::State& state) {
    RandomStream rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(sample_sibuya_bernoulli(0.5, rng));
}
BENCHMARK(BM_SampleSibuyaBernoulli);

static void BM_SieveRound(benchmark::State& state) {
    IncrementLaw law = IncrementLaw::geometric(0.5);
    SieveState initial = make_initial_state(static_cast<std::uint64_t>(state.range(0)));
    std::uint64_t round = 0;
    for (auto _ : state) {
        WalkPath walk(law, RandomStream::derive(1, {round++}));
        benchmark::DoNotOptimize(sieve_round(initial, walk));
    }
}
BENCHMARK(BM_SieveRound)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_TimeToExtinction(benchmark::State& state) {
    IncrementLaw law = IncrementLaw::geometric(0.5);
    std::uint64_t replica = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(time_to_extinction(1024, law, 1, replica++));
}
BENCHMARK(BM_TimeToExtinction);

static void BM_ComposedLabels(benchmark::State& state) {
    IncrementLaw law = IncrementLaw::geometric(0.5);
    std::uint64_t replica = 0;
    for (auto _ : state) {
        WalkFamily family(law, 8, 1, replica++);
        benchmark::DoNotOptimize(composed_labels(family, 8, 10));
    }
}
BENCHMARK(BM_ComposedLabels);

static void BM_SibuyaGWCapped(benchmark::State& state) {
    IncrementLaw law = IncrementLaw::sibuya(0.5);
    std::uint64_t replica = 0;
    for (auto _ : state) {
        RandomStream rng = RandomStream::derive(1, {replica++});
        benchmark::DoNotOptimize(gw_run_exact(law, 3, rng, 100));
    }
}
BENCHMARK(BM_SibuyaGWCapped);

static void BM_PoissonPointsAt(benchmark::State& state) {
    PoissonProcessSampler sampler;
    std::vector<std::uint64_t> idx(10);
    for (std::uint64_t i = 0; i < 10; ++i) idx[i] = (i + 1) * 1000;
    std::uint64_t replica = 0;
    for (auto _ : state) {
        RandomStream rng = RandomStream::derive(1, {replica++});
        benchmark::DoNotOptimize(sampler.points_at(idx, rng));
    }
}
BENCHMARK(BM_PoissonPointsAt);

static void BM_KsOneSample(benchmark::State& state) {
    RandomStream rng(1);
    std::vector<double> values(static_cast<std::size_t>(state.range(0)));
    for (auto& v : values) v = rng.exponential();
    auto cdf = [](double x) { return x > 0.0 ? 1.0 - std::exp(-x) : 0.0; };
    for (auto _ : state)
        benchmark::DoNotOptimize(ks_statistic_one_sample(values, cdf));
}
BENCHMARK(BM_KsOneSample)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
