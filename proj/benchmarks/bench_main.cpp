#include <map>

#include <benchmark/benchmark.h>

#include <lsprt/lsprt.hpp>

using namespace lsprt;

namespace {

const LabeledDataset& synthetic(std::size_t n) {
    static std::map<std::size_t, LabeledDataset> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gen_labeled(reference_synthetic_task(), n, n, 1)).first;
    return it->second;
}

void BM_FeatureMatrix(benchmark::State& state) {
    const auto& data = synthetic(2000);
    const KernelGeometry g{pick_centers(data, static_cast<std::size_t>(state.range(0)), 1), 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(feature_matrix(data.class0, g));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(data.class0.size()));
}
BENCHMARK(BM_FeatureMatrix)->Arg(25)->Arg(50)->Arg(100);

void BM_FitWkdrf(benchmark::State& state) {
    const auto& data = synthetic(static_cast<std::size_t>(state.range(0)));
    WkdrfConfig cfg;
    cfg.seed = 2;
    for (auto _ : state) benchmark::DoNotOptimize(fit_wkdrf(data, cfg));
}
BENCHMARK(BM_FitWkdrf)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_FitKl(benchmark::State& state) {
    const auto& data = synthetic(static_cast<std::size_t>(state.range(0)));
    KlFitConfig cfg;
    cfg.seed = 2;
    for (auto _ : state) benchmark::DoNotOptimize(fit_kl(data, cfg));
}
BENCHMARK(BM_FitKl)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_AdaBoost(benchmark::State& state) {
    const auto& data = synthetic(2000);
    AdaBoostConfig cfg;
    cfg.rounds = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(train_adaboost(data, cfg));
}
BENCHMARK(BM_AdaBoost)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_MonteCarloOracle(benchmark::State& state) {
    const auto task = reference_synthetic_task();
    const auto scorer = oracle_scorer(task);
    const auto streams = mixture_streams(task);
    EvalOptions o;
    o.trials = static_cast<std::size_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(monte_carlo(*scorer, streams, thresholds_from_errors({0.05, 0.05}), o));
    state.SetItemsProcessed(state.iterations() * 2 * state.range(0));
}
BENCHMARK(BM_MonteCarloOracle)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_EnsembleScore(benchmark::State& state) {
    const auto& data = synthetic(2000);
    const auto e = train_adaboost(data, AdaBoostConfig{});
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(ensemble_score(e, data.class1[i++ % data.class1.size()]));
}
BENCHMARK(BM_EnsembleScore);

} // namespace
BENCHMARK_MAIN();
