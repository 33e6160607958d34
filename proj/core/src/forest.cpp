#include "prefspace/forest.hpp"

#include <algorithm>
#include <cmath>

#include "prefspace/errors.hpp"

namespace prefspace {

namespace {

constexpr std::uint64_t kTreeStreamTag = 0x74726565u;
constexpr int kMaxDegenerateRetries = 8;

struct Builder {
    const PreferenceMatrix& data;
    const ForestConfig& cfg;
    std::size_t depth_cap;
    Rng& rng;
    OpCounters& counters;

    std::unique_ptr<TreeNode> build(std::vector<std::uint32_t>& rows, std::size_t depth) {
        auto node = std::make_unique<TreeNode>();
        node->size = rows.size();
        if (rows.size() <= cfg.min_node_size || depth >= depth_cap) return node;

        if (cfg.scheme == SplitScheme::kRuzHash) {
            return build_hash_split(std::move(node), rows, depth);
        }
        return build_voronoi_split(std::move(node), rows, depth);
    }

    std::unique_ptr<TreeNode> build_hash_split(std::unique_ptr<TreeNode> node,
                                               std::vector<std::uint32_t>& rows,
                                               std::size_t depth) {
        for (int attempt = 0; attempt <= kMaxDegenerateRetries; ++attempt) {
            const SplitRule rule = make_split_rule(data.dim, cfg.branching, rng);
            std::vector<std::vector<std::uint32_t>> groups(cfg.branching);
            for (const std::uint32_t row : rows) {
                ++counters.rule_evals;
                groups[rule.route(data.rows[row])].push_back(row);
            }
            const bool degenerate = std::any_of(groups.begin(), groups.end(),
                                                [&](const auto& g) { return g.size() == rows.size(); });
            if (degenerate) continue;
            node->rule = rule;
            node->children.reserve(cfg.branching);
            for (auto& group : groups) {
                node->children.push_back(build(group, depth + 1));
            }
            return node;
        }
        return node;  // all retries put every point in one group; stay a leaf
    }

    std::unique_ptr<TreeNode> build_voronoi_split(std::unique_ptr<TreeNode> node,
                                                  std::vector<std::uint32_t>& rows,
                                                  std::size_t depth) {
        const std::uint32_t b = cfg.branching;
        if (rows.size() < b) return node;  // not enough points for distinct centers

        const auto center_positions =
            rng.sample_without_replacement(static_cast<std::uint32_t>(rows.size()), b);
        VoronoiRule rule;
        rule.kind = cfg.voronoi_distance;
        rule.center_rows.reserve(b);
        for (const std::uint32_t pos : center_positions) rule.center_rows.push_back(rows[pos]);

        std::vector<std::vector<std::uint32_t>> cells(b);
        std::vector<char> is_center(rows.size(), 0);
        for (std::uint32_t c = 0; c < b; ++c) {
            is_center[center_positions[c]] = 1;
            cells[c].push_back(rule.center_rows[c]);  // centers stay in their own cell
        }
        for (std::size_t pos = 0; pos < rows.size(); ++pos) {
            if (is_center[pos]) continue;
            const std::uint32_t row = rows[pos];
            std::uint32_t best = 0;
            double best_dist = 0.0;
            for (std::uint32_t c = 0; c < b; ++c) {
                ++counters.distance_evals;
                const double d =
                    distance(rule.kind, data.rows[row], data.rows[rule.center_rows[c]]);
                if (c == 0 || d < best_dist) {
                    best_dist = d;
                    best = c;
                }
            }
            cells[best].push_back(row);
        }

        node->rule = rule;
        node->children.reserve(b);
        for (auto& cell : cells) {
            node->children.push_back(build(cell, depth + 1));
        }
        return node;
    }
};

const TreeNode* descend(const TreeNode& node, const PreferenceVector& p,
                        const PreferenceMatrix* data, OpCounters& counters) {
    if (const auto* split = std::get_if<SplitRule>(&*node.rule)) {
        ++counters.rule_evals;
        return node.children[split->route(p)].get();
    }
    const auto& rule = std::get<VoronoiRule>(*node.rule);
    std::uint32_t best = 0;
    double best_dist = 0.0;
    for (std::uint32_t c = 0; c < rule.center_rows.size(); ++c) {
        ++counters.distance_evals;
        const double d = distance(rule.kind, p, data->rows[rule.center_rows[c]]);
        if (c == 0 || d < best_dist) {
            best_dist = d;
            best = c;
        }
    }
    return node.children[best].get();
}

std::size_t node_depth(const TreeNode& node) {
    std::size_t deepest = 0;
    for (const auto& child : node.children) {
        deepest = std::max(deepest, 1 + node_depth(*child));
    }
    return deepest;
}

}  // namespace

Tree::Tree(std::unique_ptr<TreeNode> root, std::shared_ptr<const PreferenceMatrix> data,
           std::uint32_t branching)
    : root_(std::move(root)), data_(std::move(data)), branching_(branching) {}

double Tree::height(const PreferenceVector& p, OpCounters& counters) const {
    const TreeNode* node = root_.get();
    std::size_t depth = 0;
    while (!node->is_leaf()) {
        node = descend(*node, p, data_.get(), counters);
        ++depth;
    }
    const auto occupancy = static_cast<double>(std::max<std::size_t>(node->size, 1));
    return static_cast<double>(depth) +
           std::log(occupancy) / std::log(static_cast<double>(branching_));
}

double Tree::height(const PreferenceVector& p) const {
    OpCounters ignored;
    return height(p, ignored);
}

std::size_t Tree::max_depth() const {
    return node_depth(*root_);
}

Forest::Forest(std::vector<Tree> trees, ForestConfig config, std::size_t effective_psi,
               OpCounters train_counters)
    : trees_(std::move(trees)),
      config_(config),
      effective_psi_(effective_psi),
      train_counters_(train_counters) {}

std::size_t max_tree_depth(std::size_t psi, std::uint32_t branching) {
    if (branching < 2) throw InvalidArgumentError("branching factor must be at least 2");
    std::size_t depth = 0;
    std::size_t reach = 1;
    while (reach <= psi / branching) {
        reach *= branching;
        ++depth;
    }
    return depth;
}

namespace {

void validate_config(const ForestConfig& cfg, std::uint32_t dim) {
    if (cfg.trees < 1) throw InvalidArgumentError("forest needs at least one tree");
    if (cfg.psi < 2) throw InvalidArgumentError("subsample size must be at least 2");
    if (cfg.branching < 2) throw InvalidArgumentError("branching factor must be at least 2");
    if (cfg.scheme == SplitScheme::kRuzHash && cfg.branching > dim) {
        throw InvalidArgumentError("branching factor cannot exceed the embedding dimension");
    }
}

Tree build_tree_on(std::shared_ptr<const PreferenceMatrix> data, std::vector<std::uint32_t> rows,
                   const ForestConfig& cfg, std::size_t depth_cap, Rng& rng,
                   OpCounters& counters) {
    Builder builder{*data, cfg, depth_cap, rng, counters};
    auto root = builder.build(rows, 0);
    const bool needs_data = cfg.scheme == SplitScheme::kVoronoi;
    return Tree(std::move(root), needs_data ? std::move(data) : nullptr, cfg.branching);
}

}  // namespace

Tree build_tree(const std::vector<PreferenceVector>& sub, const ForestConfig& cfg, Rng& rng) {
    if (sub.empty()) throw InvalidArgumentError("cannot build a tree over zero points");
    validate_config(cfg, sub.front().dim());
    auto data = std::make_shared<PreferenceMatrix>();
    data->dim = sub.front().dim();
    data->rows = sub;
    std::vector<std::uint32_t> rows(sub.size());
    for (std::uint32_t i = 0; i < rows.size(); ++i) rows[i] = i;
    OpCounters counters;
    const std::size_t psi = std::min(cfg.psi, sub.size());
    return build_tree_on(std::move(data), std::move(rows), cfg, max_tree_depth(psi, cfg.branching),
                         rng, counters);
}

Forest build_forest(const PreferenceMatrix& matrix, const ForestConfig& cfg) {
    if (matrix.size() == 0) throw InvalidArgumentError("cannot build a forest over an empty matrix");
    validate_config(cfg, matrix.dim);

    const auto n = static_cast<std::uint32_t>(matrix.size());
    const std::size_t effective_psi = std::min(cfg.psi, matrix.size());
    const std::size_t depth_cap = max_tree_depth(effective_psi, cfg.branching);

    auto shared = std::make_shared<PreferenceMatrix>(matrix);
    OpCounters counters;
    std::vector<Tree> trees;
    trees.reserve(cfg.trees);
    for (std::size_t k = 0; k < cfg.trees; ++k) {
        Rng tree_rng(derive_seed(cfg.seed, kTreeStreamTag, k));
        auto rows = tree_rng.sample_without_replacement(n, static_cast<std::uint32_t>(effective_psi));
        trees.push_back(build_tree_on(shared, std::move(rows), cfg, depth_cap, tree_rng, counters));
    }
    return Forest(std::move(trees), cfg, effective_psi, counters);
}

double anomaly_score(std::span<const double> heights, std::size_t psi, std::uint32_t branching) {
    if (psi < 2) throw InvalidArgumentError("anomaly score needs psi >= 2");
    if (branching < 2) throw InvalidArgumentError("anomaly score needs branching >= 2");
    if (heights.empty()) throw InvalidArgumentError("anomaly score needs at least one height");
    double mean = 0.0;
    for (const double h : heights) mean += h;
    mean /= static_cast<double>(heights.size());
    const double normalizer =
        std::log(static_cast<double>(psi)) / std::log(static_cast<double>(branching));
    return std::exp2(-mean / normalizer);
}

ScoreResult score_all(const PreferenceMatrix& matrix, const Forest& forest) {
    ScoreResult result;
    result.scores.reserve(matrix.size());
    std::vector<double> heights(forest.trees().size());
    for (const PreferenceVector& row : matrix.rows) {
        for (std::size_t k = 0; k < forest.trees().size(); ++k) {
            heights[k] = forest.trees()[k].height(row, result.counters);
        }
        result.scores.push_back(
            anomaly_score(heights, forest.effective_psi(), forest.config().branching));
    }
    return result;
}

std::vector<std::vector<std::size_t>> voronoi_split(std::span<const PreferenceVector> points,
                                                    std::uint32_t branches, DistanceKind kind,
                                                    Rng& rng) {
    if (points.size() < branches) {
        throw InvalidArgumentError("nearest-center split needs at least `branches` points");
    }
    const auto centers =
        rng.sample_without_replacement(static_cast<std::uint32_t>(points.size()), branches);
    std::vector<std::vector<std::size_t>> cells(branches);
    std::vector<char> is_center(points.size(), 0);
    for (std::uint32_t c = 0; c < branches; ++c) {
        is_center[centers[c]] = 1;
        cells[c].push_back(centers[c]);
    }
    for (std::size_t pos = 0; pos < points.size(); ++pos) {
        if (is_center[pos]) continue;
        std::uint32_t best = 0;
        double best_dist = 0.0;
        for (std::uint32_t c = 0; c < branches; ++c) {
            const double d = distance(kind, points[pos], points[centers[c]]);
            if (c == 0 || d < best_dist) {
                best_dist = d;
                best = c;
            }
        }
        cells[best].push_back(pos);
    }
    return cells;
}

}  // namespace prefspace
