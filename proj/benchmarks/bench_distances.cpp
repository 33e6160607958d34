// Microbenchmarks for the preference-space distance kernels and the hashing
// split rule, at the pool sizes the forests actually see (m = 10n).

#include <benchmark/benchmark.h>

#include <vector>

#include "prefspace/distances.hpp"
#include "prefspace/hashing.hpp"
#include "prefspace/random.hpp"

using namespace prefspace;

namespace {

std::vector<PreferenceVector> make_vectors(std::uint32_t dim, double fill, std::size_t count,
                                           std::uint64_t seed) {
    Rng rng(seed);
    std::vector<PreferenceVector> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<std::pair<std::uint32_t, double>> entries;
        for (std::uint32_t d = 0; d < dim; ++d) {
            if (rng.uniform01() < fill) entries.emplace_back(d, rng.uniform01());
        }
        out.emplace_back(dim, std::move(entries));
    }
    return out;
}

void BM_Ruzicka(benchmark::State& state) {
    const auto dim = static_cast<std::uint32_t>(state.range(0));
    const auto vectors = make_vectors(dim, 0.15, 64, 1);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ruzicka(vectors[i % 64], vectors[(i + 7) % 64]));
        ++i;
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

void BM_Tanimoto(benchmark::State& state) {
    const auto dim = static_cast<std::uint32_t>(state.range(0));
    const auto vectors = make_vectors(dim, 0.15, 64, 2);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(tanimoto(vectors[i % 64], vectors[(i + 7) % 64]));
        ++i;
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

void BM_SplitRuleRoute(benchmark::State& state) {
    const auto dim = static_cast<std::uint32_t>(state.range(0));
    const auto vectors = make_vectors(dim, 0.15, 64, 3);
    Rng rng(4);
    const SplitRule rule = make_split_rule(dim, 8, rng);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rule.route(vectors[i % 64]));
        ++i;
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}

void BM_EstimateRuzicka(benchmark::State& state) {
    const auto trials = static_cast<std::size_t>(state.range(0));
    const auto vectors = make_vectors(100, 0.5, 2, 5);
    Rng rng(6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_ruzicka(vectors[0], vectors[1], trials, rng));
    }
}

}  // namespace

BENCHMARK(BM_Ruzicka)->Arg(1000)->Arg(5000)->Arg(20000);
BENCHMARK(BM_Tanimoto)->Arg(1000)->Arg(5000)->Arg(20000);
BENCHMARK(BM_SplitRuleRoute)->Arg(1000)->Arg(5000)->Arg(20000);
BENCHMARK(BM_EstimateRuzicka)->Arg(100)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
