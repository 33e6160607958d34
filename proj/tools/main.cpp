// prefspace command line: synthetic scene generation, anomaly scoring and
// benchmark sweeps over the preference-space isolation forests.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "prefspace/datagen.hpp"
#include "prefspace/errors.hpp"
#include "prefspace/eval.hpp"
#include "prefspace/forest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

std::uint64_t default_seed() {
    // PREFSPACE_SEED is the fallback when no --seed flag is given.
    if (const char* env = std::getenv("PREFSPACE_SEED")) {
        char* end = nullptr;
        const unsigned long long value = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return value;
        std::fprintf(stderr, "warning: ignoring non-numeric PREFSPACE_SEED\n");
    }
    return 42;
}

prefspace::ModelFamily parse_family(const std::string& name) {
    if (name == "lines") return prefspace::ModelFamily::kLines;
    if (name == "circles") return prefspace::ModelFamily::kCircles;
    if (name == "mixed") return prefspace::ModelFamily::kMixed;
    throw CLI::ValidationError("--kind", "must be one of lines|circles|mixed");
}

int cmd_generate(const std::string& kind, std::size_t structures, std::size_t points_per,
                 double sigma, double ratio, double extent, std::uint64_t seed,
                 const std::string& out, const std::string& structures_out) {
    prefspace::SyntheticSpec spec;
    spec.kind = parse_family(kind);
    spec.structures = structures;
    spec.points_per_structure = points_per;
    spec.sigma = sigma;
    spec.anomaly_ratio = ratio;
    spec.bbox = {-extent, extent, -extent, extent};
    spec.seed = seed;

    const prefspace::Scene scene = prefspace::generate(spec);
    prefspace::save_csv(scene.data, out);
    if (!structures_out.empty()) {
        prefspace::save_structures(scene.structures, structures_out);
    }

    std::size_t anomalies = 0;
    for (const auto label : scene.data.labels) {
        anomalies += label == prefspace::Label::kAnomaly;
    }
    std::printf("n=%zu anomalies=%zu seed=%llu -> %s\n", scene.data.size(), anomalies,
                static_cast<unsigned long long>(seed), out.c_str());
    return kExitOk;
}

int cmd_score(const std::string& data_path, const std::string& method_name, std::size_t trees,
              std::size_t psi, std::uint32_t branching, std::size_t pool_mult, double k,
              std::optional<double> sigma, const std::string& structures_path,
              const std::string& family_name, std::uint64_t seed, const std::string& out) {
    const auto method = prefspace::method_from_name(method_name);
    if (!method) throw CLI::ValidationError("--method", "must be one of rhf|rhf-b|pif|pif-b|pif-r");

    const prefspace::Dataset data = prefspace::load_csv(data_path);

    double sigma_value = 0.0;
    if (sigma.has_value()) {
        sigma_value = *sigma;
    } else if (!structures_path.empty()) {
        const auto structures = prefspace::load_structures(structures_path);
        sigma_value = prefspace::estimate_sigma(data, structures);
    } else {
        throw CLI::ValidationError("--sigma", "required unless --structures is given");
    }

    prefspace::Rng rng(prefspace::derive_seed(seed, 0x73636f72u));
    const prefspace::ModelPool pool =
        prefspace::sample_pool(data, pool_mult * data.size(), parse_family(family_name), rng);
    const prefspace::EmbeddingConfig embed_cfg(sigma_value, k, prefspace::method_mode(*method));
    const prefspace::PreferenceMatrix matrix = prefspace::embed_dataset(data, pool, embed_cfg);

    prefspace::ForestConfig forest_cfg;
    forest_cfg.trees = trees;
    forest_cfg.psi = psi;
    forest_cfg.branching = branching;
    forest_cfg.scheme = prefspace::method_scheme(*method);
    forest_cfg.voronoi_distance = prefspace::method_distance(*method);
    forest_cfg.seed = rng.next_u64();

    const prefspace::Forest forest = prefspace::build_forest(matrix, forest_cfg);
    const prefspace::ScoreResult result = prefspace::score_all(matrix, forest);
    prefspace::write_scores_csv(out, result.scores, data.labels);

    std::string summary = "n=" + std::to_string(data.size()) + " m=" + std::to_string(pool.size()) +
                          " method=" + method_name + " sigma=" + std::to_string(sigma_value);
    try {
        summary += " auc=" + std::to_string(prefspace::roc_auc(result.scores, data.labels));
    } catch (const prefspace::SingleClassError&) {
        // unlabeled or single-class data: scores are still written
    }
    std::printf("%s -> %s\n", summary.c_str(), out.c_str());
    return kExitOk;
}

int cmd_bench(const std::string& config_path, const std::string& out_override,
              const std::string& scores_dir_override, std::optional<std::uint64_t> seed_flag) {
    prefspace::SweepConfig cfg = prefspace::load_sweep_config(config_path);
    if (seed_flag.has_value()) cfg.seed = *seed_flag;
    if (!scores_dir_override.empty()) cfg.scores_dir = scores_dir_override;
    const std::string out = out_override.empty() ? "report.json" : out_override;

    const auto reports = prefspace::run_sweep(
        cfg, [](prefspace::MethodId method, std::uint32_t b, const prefspace::RunRecord& record) {
            std::fprintf(stderr,
                         "[%s b=%u run=%zu] auc=%.4f embed=%.3fs train=%.3fs test=%.3fs\n",
                         prefspace::method_name(method), b, record.run, record.auc,
                         record.embed_time_s, record.train_time_s, record.test_time_s);
        });
    prefspace::write_report_json(out, cfg, reports);
    std::printf("wrote %zu reports -> %s\n", reports.size(), out.c_str());
    return kExitOk;
}

int cmd_estimate(const std::string& data_path, const std::string& structures_path) {
    const prefspace::Dataset data = prefspace::load_csv(data_path);
    const auto structures = prefspace::load_structures(structures_path);
    std::printf("sigma=%.17g\n", prefspace::estimate_sigma(data, structures));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structure-based anomaly detection in the preference space"};
    app.require_subcommand(1);
    const std::uint64_t seed_fallback = default_seed();

    // generate
    auto* generate = app.add_subcommand("generate", "Write a synthetic labeled dataset CSV");
    std::string gen_kind = "lines";
    std::size_t gen_structures = 2;
    std::size_t gen_points_per = 125;
    double gen_sigma = 0.05;
    double gen_ratio = 0.5;
    double gen_extent = 2.0;
    std::uint64_t gen_seed = seed_fallback;
    std::string gen_out;
    std::string gen_structures_out;
    generate->add_option("--kind", gen_kind, "Structure family: lines|circles|mixed");
    generate->add_option("--structures", gen_structures, "Number of structures");
    generate->add_option("--points-per", gen_points_per, "Genuine points per structure");
    generate->add_option("--sigma", gen_sigma, "Perpendicular noise standard deviation");
    generate->add_option("--ratio", gen_ratio, "Anomaly fraction |A| / |X|")
        ->check(CLI::Range(std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0)));
    generate->add_option("--extent", gen_extent, "Scene half-extent (bbox is [-e, e]^2)");
    generate->add_option("--seed", gen_seed, "RNG seed");
    generate->add_option("-o,--out", gen_out, "Output CSV path")->required();
    generate->add_option("--structures-out", gen_structures_out,
                         "Also write the generating structures JSON");

    // score
    auto* score = app.add_subcommand("score", "Score a dataset CSV with one method");
    std::string score_data;
    std::string score_method = "rhf";
    std::size_t score_trees = 100;
    std::size_t score_psi = 256;
    std::uint32_t score_branching = 4;
    std::size_t score_pool_mult = 10;
    double score_k = 3.0;
    std::optional<double> score_sigma;
    std::string score_structures;
    std::string score_family = "lines";
    std::uint64_t score_seed = seed_fallback;
    std::string score_out;
    score->add_option("data", score_data, "Dataset CSV (x,y,label)")->required();
    score->add_option("--method", score_method, "rhf|rhf-b|pif|pif-b|pif-r");
    score->add_option("--trees", score_trees, "Number of trees");
    score->add_option("--psi", score_psi, "Subsample size per tree");
    score->add_option("--branching", score_branching, "Branching factor");
    score->add_option("--pool-mult", score_pool_mult, "Pool size as a multiple of n");
    score->add_option("--k", score_k, "Inlier threshold multiplier (epsilon = k * sigma)");
    score->add_option("--sigma", score_sigma, "Noise level (skips estimation)");
    score->add_option("--structures", score_structures,
                      "Structures JSON used to estimate sigma");
    score->add_option("--model-kind", score_family, "Pool family: lines|circles|mixed");
    score->add_option("--seed", score_seed, "RNG seed");
    score->add_option("-o,--out", score_out, "Output scores CSV")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "Run a sweep described by a JSON config");
    std::string bench_config;
    std::string bench_out;
    std::string bench_scores_dir;
    std::optional<std::uint64_t> bench_seed;
    bench->add_option("config", bench_config, "Sweep config JSON")->required();
    bench->add_option("-o,--out", bench_out, "Report JSON path (default report.json)");
    bench->add_option("--scores-dir", bench_scores_dir, "Directory for per-cell score CSVs");
    bench->add_option("--seed", bench_seed, "Override the config seed");

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Estimate noise sigma from labeled data");
    std::string est_data;
    std::string est_structures;
    estimate->add_option("data", est_data, "Dataset CSV (x,y,label)")->required();
    estimate->add_option("--structures", est_structures, "Generating structures JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (generate->parsed()) {
            return cmd_generate(gen_kind, gen_structures, gen_points_per, gen_sigma, gen_ratio,
                                gen_extent, gen_seed, gen_out, gen_structures_out);
        }
        if (score->parsed()) {
            return cmd_score(score_data, score_method, score_trees, score_psi, score_branching,
                             score_pool_mult, score_k, score_sigma, score_structures, score_family,
                             score_seed, score_out);
        }
        if (bench->parsed()) {
            return cmd_bench(bench_config, bench_out, bench_scores_dir, bench_seed);
        }
        if (estimate->parsed()) {
            return cmd_estimate(est_data, est_structures);
        }
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const prefspace::InvalidArgumentError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const prefspace::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const prefspace::FormatError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const prefspace::Error& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternal;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kExitInternal;
    }
    return kExitUsage;
}
