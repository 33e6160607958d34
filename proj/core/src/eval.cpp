#include "prefspace/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "prefspace/errors.hpp"

namespace prefspace {

namespace {

constexpr std::uint64_t kDataStreamTag = 0x64617461u;
constexpr std::uint64_t kCellStreamTag = 0x63656c6cu;
constexpr std::uint64_t kForestStreamTag = 0x666f7265u;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const Label> labels) {
    if (scores.size() != labels.size()) {
        throw InvalidArgumentError("scores and labels must have equal length");
    }
    std::size_t positives = 0;
    for (const Label label : labels) positives += label == Label::kAnomaly;
    const std::size_t negatives = labels.size() - positives;
    if (positives == 0 || negatives == 0) {
        throw SingleClassError("ROC AUC needs both classes present");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Midranks over tie groups, accumulated for the positive class.
    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[order[k]] == Label::kAnomaly) positive_rank_sum += midrank;
        }
        i = j + 1;
    }
    const double np = static_cast<double>(positives);
    const double nn = static_cast<double>(negatives);
    return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double estimate_sigma(const Dataset& data, std::span<const StructureModel> structures) {
    if (structures.empty()) throw InvalidArgumentError("need at least one generating structure");

    std::vector<double> residuals;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.labels[i] != Label::kGenuine) continue;
        double best_signed = signed_residual(structures.front(), data.points[i]);
        for (std::size_t s = 1; s < structures.size(); ++s) {
            const double r = signed_residual(structures[s], data.points[i]);
            if (std::abs(r) < std::abs(best_signed)) best_signed = r;
        }
        residuals.push_back(best_signed);
    }
    if (residuals.empty()) throw InvalidArgumentError("dataset has no genuine points");
    if (residuals.size() == 1) return 0.0;

    const double mean =
        std::accumulate(residuals.begin(), residuals.end(), 0.0) / static_cast<double>(residuals.size());
    double ss = 0.0;
    for (const double r : residuals) ss += (r - mean) * (r - mean);
    return std::sqrt(ss / static_cast<double>(residuals.size() - 1));
}

const char* method_name(MethodId method) {
    switch (method) {
        case MethodId::kRhf: return "rhf";
        case MethodId::kRhfB: return "rhf-b";
        case MethodId::kPif: return "pif";
        case MethodId::kPifB: return "pif-b";
        case MethodId::kPifR: return "pif-r";
    }
    return "?";
}

std::optional<MethodId> method_from_name(const std::string& name) {
    for (const MethodId m :
         {MethodId::kRhf, MethodId::kRhfB, MethodId::kPif, MethodId::kPifB, MethodId::kPifR}) {
        if (name == method_name(m)) return m;
    }
    return std::nullopt;
}

PreferenceMode method_mode(MethodId method) {
    return method == MethodId::kRhfB || method == MethodId::kPifB ? PreferenceMode::kBinary
                                                                  : PreferenceMode::kContinuous;
}

SplitScheme method_scheme(MethodId method) {
    return method == MethodId::kRhf || method == MethodId::kRhfB ? SplitScheme::kRuzHash
                                                                 : SplitScheme::kVoronoi;
}

DistanceKind method_distance(MethodId method) {
    switch (method) {
        case MethodId::kPif: return DistanceKind::kTanimoto;
        case MethodId::kPifB: return DistanceKind::kJaccard;
        default: return DistanceKind::kRuzicka;
    }
}

namespace {

struct RunInput {
    Dataset data;
    double sigma = 0.0;
    ModelFamily family = ModelFamily::kLines;
};

RunInput prepare_run_input(const SweepConfig& cfg, std::size_t run) {
    RunInput input;
    if (cfg.scene.has_value()) {
        SyntheticSpec spec = *cfg.scene;
        spec.seed = derive_seed(cfg.seed, kDataStreamTag, run);
        Scene scene = generate(spec);
        input.sigma = estimate_sigma(scene.data, scene.structures);
        input.data = std::move(scene.data);
        input.family = spec.kind;
        return input;
    }
    if (!cfg.dataset_path.has_value()) {
        throw InvalidArgumentError("sweep config needs a scene or a dataset path");
    }
    input.data = load_csv(*cfg.dataset_path);
    input.family = cfg.model_family;
    if (cfg.sigma.has_value()) {
        input.sigma = *cfg.sigma;
    } else if (cfg.structures_path.has_value()) {
        const auto structures = load_structures(*cfg.structures_path);
        input.sigma = estimate_sigma(input.data, structures);
    } else {
        throw InvalidArgumentError("file datasets need `sigma` or a structures sidecar");
    }
    return input;
}

void validate_sweep(const SweepConfig& cfg) {
    if (cfg.methods.empty()) throw InvalidArgumentError("sweep needs at least one method");
    if (cfg.b_values.empty()) throw InvalidArgumentError("sweep needs at least one branching factor");
    for (const std::uint32_t b : cfg.b_values) {
        if (b < 2 || b > cfg.psi) {
            throw InvalidArgumentError("branching factors must lie in [2, psi]");
        }
    }
    if (cfg.runs < 1) throw InvalidArgumentError("sweep needs at least one run");
    if (cfg.pool_multiplier < 1) throw InvalidArgumentError("pool multiplier must be at least 1");
    if (!(cfg.k > 0.0)) throw InvalidArgumentError("inlier multiplier k must be positive");
}

std::filesystem::path scores_file_path(const std::filesystem::path& dir, MethodId method,
                                       std::uint32_t b, std::size_t run) {
    return dir / ("scores_" + std::string(method_name(method)) + "_b" + std::to_string(b) +
                  "_run" + std::to_string(run) + ".csv");
}

}  // namespace

std::vector<EvalReport> run_sweep(const SweepConfig& cfg, const ProgressFn& progress) {
    validate_sweep(cfg);
    if (cfg.scores_dir.has_value()) std::filesystem::create_directories(*cfg.scores_dir);

    // Data (and its estimated noise level) is fixed per run, shared by all cells.
    std::vector<RunInput> inputs;
    inputs.reserve(cfg.runs);
    for (std::size_t run = 0; run < cfg.runs; ++run) inputs.push_back(prepare_run_input(cfg, run));

    std::vector<EvalReport> reports;
    for (const MethodId method : cfg.methods) {
        for (const std::uint32_t b : cfg.b_values) {
            EvalReport report;
            report.method = method;
            report.b = b;
            report.run_count = cfg.runs;
            for (std::size_t run = 0; run < cfg.runs; ++run) {
                const RunInput& input = inputs[run];
                Rng cell_rng(derive_seed(derive_seed(cfg.seed, kCellStreamTag,
                                                     static_cast<std::uint64_t>(method)),
                                         b, run));

                const std::size_t pool_size = cfg.pool_multiplier * input.data.size();
                const ModelPool pool = sample_pool(input.data, pool_size, input.family, cell_rng);
                const EmbeddingConfig embed_cfg(input.sigma, cfg.k, method_mode(method));

                RunRecord record;
                record.run = run;

                auto tick = Clock::now();
                const PreferenceMatrix matrix = embed_dataset(input.data, pool, embed_cfg);
                record.embed_time_s = seconds_since(tick);

                ForestConfig forest_cfg;
                forest_cfg.trees = cfg.trees;
                forest_cfg.psi = cfg.psi;
                forest_cfg.branching = b;
                forest_cfg.scheme = method_scheme(method);
                forest_cfg.voronoi_distance = method_distance(method);
                forest_cfg.seed = derive_seed(cell_rng.next_u64(), kForestStreamTag);

                tick = Clock::now();
                const Forest forest = build_forest(matrix, forest_cfg);
                record.train_time_s = seconds_since(tick);

                tick = Clock::now();
                const ScoreResult scored = score_all(matrix, forest);
                record.test_time_s = seconds_since(tick);
                record.counters = scored.counters;
                record.auc = roc_auc(scored.scores, input.data.labels);

                if (cfg.scores_dir.has_value()) {
                    write_scores_csv(scores_file_path(*cfg.scores_dir, method, b, run),
                                     scored.scores, input.data.labels);
                }
                if (progress) progress(method, b, record);
                report.runs.push_back(record);
            }

            std::vector<double> train_times;
            std::vector<double> test_times;
            for (const RunRecord& record : report.runs) {
                report.per_run_auc.push_back(record.auc);
                report.auc += record.auc;
                report.rule_evals += static_cast<double>(record.counters.rule_evals);
                report.distance_evals += static_cast<double>(record.counters.distance_evals);
                train_times.push_back(record.train_time_s);
                test_times.push_back(record.test_time_s);
            }
            const auto runs = static_cast<double>(report.run_count);
            report.auc /= runs;
            report.rule_evals /= runs;
            report.distance_evals /= runs;
            report.train_time_s = median(std::move(train_times));
            report.test_time_s = median(std::move(test_times));
            reports.push_back(std::move(report));
        }
    }
    return reports;
}

void write_scores_csv(const std::filesystem::path& path, std::span<const double> scores,
                      std::span<const Label> labels) {
    if (scores.size() != labels.size()) {
        throw InvalidArgumentError("scores and labels must have equal length");
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "# schema: 1\n";
    out << "index,score,label\n";
    char buffer[64];
    for (std::size_t i = 0; i < scores.size(); ++i) {
        std::snprintf(buffer, sizeof(buffer), "%.17g", scores[i]);
        out << i << ',' << buffer << ',' << (labels[i] == Label::kAnomaly ? '1' : '0') << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

namespace {

nlohmann::json scene_to_json(const SyntheticSpec& spec) {
    const char* kind = spec.kind == ModelFamily::kLines     ? "lines"
                       : spec.kind == ModelFamily::kCircles ? "circles"
                                                            : "mixed";
    return {{"kind", kind},
            {"structures", spec.structures},
            {"points_per_structure", spec.points_per_structure},
            {"sigma", spec.sigma},
            {"anomaly_ratio", spec.anomaly_ratio},
            {"bbox", {spec.bbox.xmin, spec.bbox.xmax, spec.bbox.ymin, spec.bbox.ymax}}};
}

ModelFamily family_from_string(const std::string& name) {
    if (name == "lines") return ModelFamily::kLines;
    if (name == "circles") return ModelFamily::kCircles;
    if (name == "mixed") return ModelFamily::kMixed;
    throw InvalidArgumentError("unknown model family `" + name + "`");
}

}  // namespace

void write_report_json(const std::filesystem::path& path, const SweepConfig& cfg,
                       std::span<const EvalReport> reports) {
    nlohmann::json doc;
    doc["schema"] = 1;

    nlohmann::json config;
    if (cfg.scene.has_value()) config["dataset"] = scene_to_json(*cfg.scene);
    if (cfg.dataset_path.has_value()) config["dataset_path"] = cfg.dataset_path->string();
    config["methods"] = nlohmann::json::array();
    for (const MethodId m : cfg.methods) config["methods"].push_back(method_name(m));
    config["b_values"] = cfg.b_values;
    config["trees"] = cfg.trees;
    config["psi"] = cfg.psi;
    config["k"] = cfg.k;
    config["pool_mult"] = cfg.pool_multiplier;
    config["runs"] = cfg.runs;
    config["seed"] = cfg.seed;
    doc["config"] = std::move(config);

    doc["reports"] = nlohmann::json::array();
    for (const EvalReport& report : reports) {
        nlohmann::json entry;
        entry["method"] = method_name(report.method);
        entry["b"] = report.b;
        entry["run_count"] = report.run_count;
        entry["auc"] = report.auc;
        entry["per_run_auc"] = report.per_run_auc;
        entry["train_time_s"] = report.train_time_s;
        entry["test_time_s"] = report.test_time_s;
        entry["rule_evals"] = report.rule_evals;
        entry["distance_evals"] = report.distance_evals;
        entry["runs"] = nlohmann::json::array();
        for (const RunRecord& record : report.runs) {
            entry["runs"].push_back({{"run", record.run},
                                     {"auc", record.auc},
                                     {"embed_time_s", record.embed_time_s},
                                     {"train_time_s", record.train_time_s},
                                     {"test_time_s", record.test_time_s},
                                     {"rule_evals", record.counters.rule_evals},
                                     {"distance_evals", record.counters.distance_evals}});
        }
        doc["reports"].push_back(std::move(entry));
    }

    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("invalid sweep config " + path.string() + ": " + e.what());
    }

    SweepConfig cfg;
    try {
        if (doc.contains("dataset")) {
            const auto& ds = doc["dataset"];
            SyntheticSpec spec;
            if (ds.contains("kind")) spec.kind = family_from_string(ds["kind"].get<std::string>());
            if (ds.contains("structures")) spec.structures = ds["structures"].get<std::size_t>();
            if (ds.contains("points_per_structure")) {
                spec.points_per_structure = ds["points_per_structure"].get<std::size_t>();
            }
            if (ds.contains("sigma")) spec.sigma = ds["sigma"].get<double>();
            if (ds.contains("anomaly_ratio")) spec.anomaly_ratio = ds["anomaly_ratio"].get<double>();
            if (ds.contains("extent")) {
                const double extent = ds["extent"].get<double>();
                spec.bbox = {-extent, extent, -extent, extent};
            }
            if (ds.contains("bbox")) {
                const auto box = ds["bbox"].get<std::vector<double>>();
                if (box.size() != 4) {
                    throw InvalidArgumentError("bbox must be [xmin, xmax, ymin, ymax]");
                }
                spec.bbox = {box[0], box[1], box[2], box[3]};
            }
            cfg.scene = spec;
        }
        if (doc.contains("dataset_path")) {
            cfg.dataset_path = doc["dataset_path"].get<std::string>();
        }
        if (doc.contains("structures_path")) {
            cfg.structures_path = doc["structures_path"].get<std::string>();
        }
        if (doc.contains("sigma")) cfg.sigma = doc["sigma"].get<double>();
        if (doc.contains("model_family")) {
            cfg.model_family = family_from_string(doc["model_family"].get<std::string>());
        }

        if (doc.contains("methods")) {
            for (const auto& name : doc["methods"]) {
                const auto method = method_from_name(name.get<std::string>());
                if (!method) {
                    throw InvalidArgumentError("unknown method `" + name.get<std::string>() + "`");
                }
                cfg.methods.push_back(*method);
            }
        } else {
            cfg.methods = {MethodId::kRhf, MethodId::kRhfB, MethodId::kPif, MethodId::kPifB,
                           MethodId::kPifR};
        }
        if (doc.contains("b_values")) {
            cfg.b_values = doc["b_values"].get<std::vector<std::uint32_t>>();
        } else {
            cfg.b_values = {2, 4, 8, 16, 32, 64, 128, 256};
        }
        if (doc.contains("trees")) cfg.trees = doc["trees"].get<std::size_t>();
        if (doc.contains("psi")) cfg.psi = doc["psi"].get<std::size_t>();
        if (doc.contains("k")) cfg.k = doc["k"].get<double>();
        if (doc.contains("pool_mult")) cfg.pool_multiplier = doc["pool_mult"].get<std::size_t>();
        if (doc.contains("runs")) cfg.runs = doc["runs"].get<std::size_t>();
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("scores_dir")) cfg.scores_dir = doc["scores_dir"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("invalid sweep config " + path.string() + ": " + e.what());
    }
    return cfg;
}

}  // namespace prefspace
