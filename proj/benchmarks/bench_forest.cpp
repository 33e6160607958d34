// End-to-end forest benchmarks on the default synthetic scene: training and
// testing cost of the hashing forest against the nearest-center baseline
// across branching factors. This is the headline comparison the bench CLI
// measures with counters and wall clock.

#include <benchmark/benchmark.h>

#include <memory>

#include "prefspace/datagen.hpp"
#include "prefspace/eval.hpp"
#include "prefspace/forest.hpp"

using namespace prefspace;

namespace {

const PreferenceMatrix& scene_matrix() {
    static const auto matrix = [] {
        SyntheticSpec spec;
        spec.points_per_structure = 75;  // n = 300
        spec.seed = 11;
        const Scene scene = generate(spec);
        const double sigma = estimate_sigma(scene.data, scene.structures);
        Rng rng(12);
        const ModelPool pool = sample_pool(scene.data, 10 * scene.data.size(), spec.kind, rng);
        const EmbeddingConfig cfg(sigma, 3.0, PreferenceMode::kContinuous);
        return std::make_unique<PreferenceMatrix>(embed_dataset(scene.data, pool, cfg));
    }();
    return *matrix;
}

ForestConfig config_for(SplitScheme scheme, std::uint32_t b, std::size_t trees) {
    ForestConfig cfg;
    cfg.trees = trees;
    cfg.psi = 256;
    cfg.branching = b;
    cfg.scheme = scheme;
    cfg.voronoi_distance = DistanceKind::kRuzicka;
    cfg.seed = 13;
    return cfg;
}

void BM_TrainHashingForest(benchmark::State& state) {
    const auto& matrix = scene_matrix();
    const auto cfg = config_for(SplitScheme::kRuzHash, static_cast<std::uint32_t>(state.range(0)), 20);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_forest(matrix, cfg));
    }
}

void BM_TrainVoronoiForest(benchmark::State& state) {
    const auto& matrix = scene_matrix();
    const auto cfg = config_for(SplitScheme::kVoronoi, static_cast<std::uint32_t>(state.range(0)), 20);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_forest(matrix, cfg));
    }
}

void BM_ScoreHashingForest(benchmark::State& state) {
    const auto& matrix = scene_matrix();
    const auto cfg = config_for(SplitScheme::kRuzHash, static_cast<std::uint32_t>(state.range(0)), 20);
    const Forest forest = build_forest(matrix, cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(score_all(matrix, forest));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(matrix.size()));
}

void BM_ScoreVoronoiForest(benchmark::State& state) {
    const auto& matrix = scene_matrix();
    const auto cfg = config_for(SplitScheme::kVoronoi, static_cast<std::uint32_t>(state.range(0)), 20);
    const Forest forest = build_forest(matrix, cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(score_all(matrix, forest));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(matrix.size()));
}

}  // namespace

BENCHMARK(BM_TrainHashingForest)->Arg(2)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainVoronoiForest)->Arg(2)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreHashingForest)->Arg(2)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreVoronoiForest)->Arg(2)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
