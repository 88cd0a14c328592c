#include <benchmark/benchmark.h>

#include "expbandit/bandit.hpp"
#include "expbandit/posterior.hpp"

namespace {

using namespace expbandit;

const Family kFamilies[] = {Family::bernoulli(),  Family::gaussian(1.0), Family::gamma(2.0),
                            Family::poisson(),    Family::pareto(1.0),   Family::weibull(2.0)};
const double kThetas[] = {0.0, 0.5, -2.0, 0.0, -3.0, -1.0};

void BM_SampleReward(benchmark::State& state) {
    const Family& fam = kFamilies[state.range(0)];
    double theta = kThetas[state.range(0)];
    RandomStream rng(42);
    for (auto _ : state) benchmark::DoNotOptimize(fam.sample_reward(theta, rng));
}
BENCHMARK(BM_SampleReward)->DenseRange(0, 5);

void BM_SampleConjugate(benchmark::State& state) {
    const Family& fam = kFamilies[state.range(0)];
    double theta = kThetas[state.range(0)];
    RandomStream rng(42);
    ArmPosterior post;
    for (int i = 0; i < 25; ++i) post = post.updated(fam, fam.sample_reward(theta, rng));
    for (auto _ : state) benchmark::DoNotOptimize(sample_conjugate(fam, post, rng));
}
BENCHMARK(BM_SampleConjugate)->DenseRange(0, 5);

void BM_SampleMh(benchmark::State& state) {
    const Family& fam = kFamilies[state.range(0)];
    double theta = kThetas[state.range(0)];
    RandomStream rng(42);
    ArmPosterior post;
    for (int i = 0; i < 25; ++i) post = post.updated(fam, fam.sample_reward(theta, rng));
    MhConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(sample_mh(fam, post, cfg, rng));
}
BENCHMARK(BM_SampleMh)->DenseRange(0, 5);

void BM_ChernoffRate(benchmark::State& state) {
    const Family& fam = kFamilies[state.range(0)];
    double theta = kThetas[state.range(0)];
    double delta = 0.25 * std::sqrt(fam.fisher_info(theta));
    for (auto _ : state) benchmark::DoNotOptimize(fam.chernoff_rate(theta, delta));
}
BENCHMARK(BM_ChernoffRate)->DenseRange(0, 5);

void BM_RunEpisode(benchmark::State& state) {
    BanditInstance instance({{Family::bernoulli(), Family::bernoulli().mean_inverse(0.5)},
                             {Family::bernoulli(), Family::bernoulli().mean_inverse(0.25)}});
    PolicyKind policy = TsJeffreysPolicy{};
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_episode(instance, policy, state.range(0), ++seed));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunEpisode)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
