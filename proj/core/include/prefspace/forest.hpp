#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "prefspace/distances.hpp"
#include "prefspace/embedding.hpp"
#include "prefspace/hashing.hpp"
#include "prefspace/random.hpp"

namespace prefspace {

enum class SplitScheme : std::uint8_t { kRuzHash, kVoronoi };

struct ForestConfig {
    std::size_t trees = 100;
    std::size_t psi = 256;
    std::uint32_t branching = 4;
    SplitScheme scheme = SplitScheme::kRuzHash;
    /// Distance driving nearest-center assignment when scheme is kVoronoi.
    DistanceKind voronoi_distance = DistanceKind::kTanimoto;
    std::uint64_t seed = 0;
    /// Nodes with at most this many points become leaves.
    std::size_t min_node_size = 1;
};

/// Deterministic work counters; the machine-independent complement to
/// wall-clock timings. A rule evaluation is one hashing-split lookup, a
/// distance evaluation one point-to-center distance.
struct OpCounters {
    std::uint64_t rule_evals = 0;
    std::uint64_t distance_evals = 0;

    OpCounters& operator+=(const OpCounters& other) {
        rule_evals += other.rule_evals;
        distance_evals += other.distance_evals;
        return *this;
    }
};

/// Nearest-center split: centers are rows of the training matrix, and points
/// go to the closest center under `kind` (ties to the lowest center index).
struct VoronoiRule {
    std::vector<std::uint32_t> center_rows;
    DistanceKind kind = DistanceKind::kTanimoto;
};

struct TreeNode {
    std::size_t size = 0;  // training points that reached this node
    std::optional<std::variant<SplitRule, VoronoiRule>> rule;
    std::vector<std::unique_ptr<TreeNode>> children;

    bool is_leaf() const { return !rule.has_value(); }
};

/// One isolation tree. Voronoi trees keep a shared handle on the training
/// matrix so center rows stay routable; hashing trees carry seeds only.
class Tree {
  public:
    Tree(std::unique_ptr<TreeNode> root, std::shared_ptr<const PreferenceMatrix> data,
         std::uint32_t branching);

    const TreeNode& root() const { return *root_; }

    /// Depth of the leaf reached by routing `p`, plus the unresolved-leaf
    /// adjustment log_b(max(leaf_size, 1)).
    double height(const PreferenceVector& p, OpCounters& counters) const;
    double height(const PreferenceVector& p) const;

    /// Longest root-to-leaf edge count.
    std::size_t max_depth() const;

  private:
    std::unique_ptr<TreeNode> root_;
    std::shared_ptr<const PreferenceMatrix> data_;
    std::uint32_t branching_;
};

class Forest {
  public:
    Forest(std::vector<Tree> trees, ForestConfig config, std::size_t effective_psi,
           OpCounters train_counters);

    const std::vector<Tree>& trees() const { return trees_; }
    const ForestConfig& config() const { return config_; }
    /// Subsample size actually used (psi clamped to the dataset size).
    std::size_t effective_psi() const { return effective_psi_; }
    const OpCounters& train_counters() const { return train_counters_; }

  private:
    std::vector<Tree> trees_;
    ForestConfig config_;
    std::size_t effective_psi_ = 0;
    OpCounters train_counters_;
};

/// Depth cap: the largest d with branching^d <= psi, computed in integers.
/// With psi = 256 this gives 8, 4, 2, 2 for b = 2, 4, 8, 16 and 1 for b >= 32,
/// which is what confines nearest-center trees to a single level at high b.
std::size_t max_tree_depth(std::size_t psi, std::uint32_t branching);

/// Build one tree over `sub`. Hashing nodes retry degenerate splits (all
/// points in one group) up to 8 times with fresh rules before giving up as a
/// leaf; nearest-center nodes need at least `branching` points to split.
Tree build_tree(const std::vector<PreferenceVector>& sub, const ForestConfig& cfg, Rng& rng);

/// t trees, each over an independent subsample of min(psi, n) rows drawn
/// without replacement; tree k's RNG derives from (seed, k), so the result
/// does not depend on construction order.
Forest build_forest(const PreferenceMatrix& matrix, const ForestConfig& cfg);

/// 2^(-mean(heights) / log_b(psi)).
double anomaly_score(std::span<const double> heights, std::size_t psi, std::uint32_t branching);

struct ScoreResult {
    std::vector<double> scores;
    OpCounters counters;
};

/// Anomaly score of every row, in row order.
ScoreResult score_all(const PreferenceMatrix& matrix, const Forest& forest);

/// Spec'd nearest-center partition over explicit points: `branches` distinct
/// centers drawn uniformly, every point assigned to its nearest center (ties
/// to the lowest center index, centers to their own cell). Returns positions.
std::vector<std::vector<std::size_t>> voronoi_split(std::span<const PreferenceVector> points,
                                                    std::uint32_t branches, DistanceKind kind,
                                                    Rng& rng);

}  // namespace prefspace
