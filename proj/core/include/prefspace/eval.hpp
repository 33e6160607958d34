#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prefspace/datagen.hpp"
#include "prefspace/forest.hpp"
#include "prefspace/geometry.hpp"

namespace prefspace {

/// Rank-based (Mann-Whitney) ROC AUC with midrank tie handling; anomalies are
/// the positive class. Throws SingleClassError when labels are uniform.
double roc_auc(std::span<const double> scores, std::span<const Label> labels);

/// Sample standard deviation of the signed residuals of genuine points to
/// their nearest generating structure. Anomalies are ignored.
double estimate_sigma(const Dataset& data, std::span<const StructureModel> structures);

/// Benchmark methods, named after the forest scheme and preference mode:
/// hashing forest (continuous / binary) and nearest-center forest with
/// Tanimoto, Jaccard-on-binary or Ruzicka distance.
enum class MethodId : std::uint8_t { kRhf, kRhfB, kPif, kPifB, kPifR };

const char* method_name(MethodId method);
std::optional<MethodId> method_from_name(const std::string& name);

PreferenceMode method_mode(MethodId method);
SplitScheme method_scheme(MethodId method);
DistanceKind method_distance(MethodId method);

struct SweepConfig {
    /// Exactly one of scene / dataset_path provides the data.
    std::optional<SyntheticSpec> scene;
    std::optional<std::filesystem::path> dataset_path;
    std::optional<std::filesystem::path> structures_path;
    /// Noise level for file datasets without a structures sidecar.
    std::optional<double> sigma;
    /// Model family for pools over file datasets (scene datasets reuse the
    /// scene's kind).
    ModelFamily model_family = ModelFamily::kLines;

    std::vector<MethodId> methods;
    std::vector<std::uint32_t> b_values;
    std::size_t trees = 100;
    std::size_t psi = 256;
    double k = 3.0;
    std::size_t pool_multiplier = 10;
    std::size_t runs = 5;
    std::uint64_t seed = 0;

    /// When set, per-cell score CSVs land here as
    /// scores_<method>_b<b>_run<run>.csv.
    std::optional<std::filesystem::path> scores_dir;
};

struct RunRecord {
    std::size_t run = 0;
    double auc = 0.0;
    double embed_time_s = 0.0;
    double train_time_s = 0.0;
    double test_time_s = 0.0;
    OpCounters counters;
};

/// Aggregate over the runs of one (method, b) cell. The headline auc is the
/// mean of the per-run values; times are medians so a single slow run cannot
/// skew speed comparisons; counters are per-run means.
struct EvalReport {
    MethodId method = MethodId::kRhf;
    std::uint32_t b = 0;
    std::size_t run_count = 0;
    double auc = 0.0;
    std::vector<double> per_run_auc;
    double train_time_s = 0.0;
    double test_time_s = 0.0;
    double rule_evals = 0.0;
    double distance_evals = 0.0;
    std::vector<RunRecord> runs;
};

using ProgressFn = std::function<void(MethodId, std::uint32_t b, const RunRecord&)>;

/// Full protocol for every method x branching-factor x run cell: sample a
/// fresh model pool, embed, build the forest, score, measure. Cells derive
/// their RNG streams from (seed, method, b, run), so results are independent
/// of execution order; runs share the per-run dataset.
std::vector<EvalReport> run_sweep(const SweepConfig& cfg, const ProgressFn& progress = {});

/// Scores CSV: `# schema: 1` comment, `index,score,label` header, 17
/// significant digits. Byte-identical for identical inputs.
void write_scores_csv(const std::filesystem::path& path, std::span<const double> scores,
                      std::span<const Label> labels);

void write_report_json(const std::filesystem::path& path, const SweepConfig& cfg,
                       std::span<const EvalReport> reports);

SweepConfig load_sweep_config(const std::filesystem::path& path);

}  // namespace prefspace
