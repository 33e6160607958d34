#include <doctest.h>

#include <cmath>
#include <set>

#include "prefspace/errors.hpp"
#include "prefspace/forest.hpp"
#include "test_support.hpp"

using namespace prefspace;
using namespace testsupport;

namespace {

PreferenceVector pv(const std::vector<double>& values) {
    return PreferenceVector::from_dense(values);
}

/// Two well-separated support clusters plus `loners` vectors with disjoint support.
PreferenceMatrix clustered_matrix(std::uint32_t dim, std::size_t per_cluster, std::size_t loners,
                                  Rng& rng) {
    PreferenceMatrix matrix;
    matrix.dim = dim;
    const std::uint32_t third = dim / 3;
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t i = 0; i < per_cluster; ++i) {
            std::vector<double> dense(dim, 0.0);
            for (std::uint32_t d = 0; d < third; ++d) {
                dense[c * third + d] = 0.6 + 0.4 * rng.uniform01();
            }
            matrix.rows.push_back(pv(dense));
        }
    }
    for (std::size_t i = 0; i < loners; ++i) {
        std::vector<double> dense(dim, 0.0);
        for (std::uint32_t d = 2 * third; d < dim; ++d) {
            if (rng.uniform01() < 0.5) dense[d] = 0.6 + 0.4 * rng.uniform01();
        }
        matrix.rows.push_back(pv(dense));
    }
    return matrix;
}

}  // namespace

TEST_CASE("max_tree_depth is the exact integer power cap") {
    CHECK(max_tree_depth(256, 2) == 8);
    CHECK(max_tree_depth(256, 4) == 4);
    CHECK(max_tree_depth(256, 8) == 2);
    CHECK(max_tree_depth(256, 16) == 2);
    CHECK(max_tree_depth(256, 32) == 1);
    CHECK(max_tree_depth(256, 256) == 1);
    CHECK(max_tree_depth(255, 2) == 7);
    CHECK(max_tree_depth(3, 2) == 1);
}

TEST_CASE("build_tree handles tiny inputs") {
    Rng rng(41);
    ForestConfig cfg;
    cfg.branching = 2;
    cfg.psi = 256;

    const Tree leaf = build_tree({pv({0.5, 0.5})}, cfg, rng);
    CHECK(leaf.root().is_leaf());
    CHECK(leaf.root().size == 1);
    CHECK(leaf.max_depth() == 0);
    CHECK(leaf.height(pv({0.1, 0.9})) == 0.0);

    CHECK_THROWS_AS(build_tree({}, cfg, rng), InvalidArgumentError);
}

TEST_CASE("tree depth respects the cap for both schemes") {
    Rng data_rng(42);
    const std::uint32_t m = 32;
    std::vector<PreferenceVector> sub;
    for (int i = 0; i < 256; ++i) sub.push_back(random_preference(m, 0.4, data_rng));

    for (const SplitScheme scheme : {SplitScheme::kRuzHash, SplitScheme::kVoronoi}) {
        for (const std::uint32_t b : {2u, 4u, 16u, 32u}) {
            ForestConfig cfg;
            cfg.branching = b;
            cfg.psi = 256;
            cfg.scheme = scheme;
            cfg.voronoi_distance = DistanceKind::kRuzicka;
            Rng rng(derive_seed(43, b, static_cast<std::uint64_t>(scheme)));
            const Tree tree = build_tree(sub, cfg, rng);
            CHECK(tree.max_depth() <= max_tree_depth(256, b));
            CHECK(tree.max_depth() >= 1);
        }
    }
}

TEST_CASE("hash tree children count and leaf sizes partition the node") {
    Rng data_rng(44);
    std::vector<PreferenceVector> sub;
    for (int i = 0; i < 64; ++i) sub.push_back(random_preference(16, 0.5, data_rng));
    ForestConfig cfg;
    cfg.branching = 4;
    cfg.psi = 64;
    Rng rng(45);
    const Tree tree = build_tree(sub, cfg, rng);

    // every internal node has exactly b children whose sizes sum to the parent
    const auto check_node = [&](const TreeNode& node, const auto& self) -> void {
        if (node.is_leaf()) return;
        REQUIRE(node.children.size() == 4);
        std::size_t total = 0;
        for (const auto& child : node.children) total += child->size;
        CHECK(total == node.size);
        for (const auto& child : node.children) self(*child, self);
    };
    check_node(tree.root(), check_node);
}

TEST_CASE("build_forest is deterministic and clamps psi") {
    Rng data_rng(46);
    PreferenceMatrix matrix;
    matrix.dim = 24;
    for (int i = 0; i < 60; ++i) matrix.rows.push_back(random_preference(24, 0.4, data_rng));

    ForestConfig cfg;
    cfg.trees = 10;
    cfg.psi = 256;  // larger than n: clamped to 60
    cfg.branching = 4;
    cfg.seed = 99;

    const Forest a = build_forest(matrix, cfg);
    const Forest b = build_forest(matrix, cfg);
    CHECK(a.effective_psi() == 60);
    REQUIRE(a.trees().size() == 10);

    const ScoreResult sa = score_all(matrix, a);
    const ScoreResult sb = score_all(matrix, b);
    CHECK(sa.scores == sb.scores);
    CHECK(sa.counters.rule_evals == sb.counters.rule_evals);

    cfg.seed = 100;
    const Forest c = build_forest(matrix, cfg);
    CHECK(score_all(matrix, c).scores != sa.scores);
}

TEST_CASE("anomaly_score evaluates the exponential form") {
    const std::vector<double> mid{8.0};
    CHECK(anomaly_score(mid, 256, 2) == doctest::Approx(0.5).epsilon(1e-12));
    const std::vector<double> zero{0.0, 0.0};
    CHECK(anomaly_score(zero, 256, 2) == 1.0);
    const std::vector<double> sixteen{16.0};
    CHECK(anomaly_score(sixteen, 256, 2) == doctest::Approx(0.25).epsilon(1e-12));
    // strictly decreasing in the mean height
    const std::vector<double> lower{3.0};
    const std::vector<double> higher{3.5};
    CHECK(anomaly_score(lower, 256, 4) > anomaly_score(higher, 256, 4));
    CHECK_THROWS_AS(anomaly_score(mid, 1, 2), InvalidArgumentError);
}

TEST_CASE("height accounts for unresolved leaves") {
    // single node of 16 points at branching 4: height must be log_4(16) = 2
    std::vector<PreferenceVector> sub;
    for (int i = 0; i < 16; ++i) sub.push_back(pv({1.0, 1.0}));  // identical: unsplittable
    ForestConfig cfg;
    cfg.branching = 2;
    cfg.psi = 16;
    Rng rng(47);
    const Tree tree = build_tree(sub, cfg, rng);
    CHECK(tree.root().is_leaf());  // identical points always collide; retries exhaust
    CHECK(tree.height(sub.front()) == doctest::Approx(4.0).epsilon(1e-12));  // log_2 16
}

TEST_CASE("scores fall in (0,1] and identical points tie") {
    Rng data_rng(48);
    PreferenceMatrix matrix;
    matrix.dim = 20;
    for (int i = 0; i < 50; ++i) matrix.rows.push_back(random_preference(20, 0.5, data_rng));
    matrix.rows.push_back(matrix.rows.front());

    ForestConfig cfg;
    cfg.trees = 20;
    cfg.psi = 51;
    cfg.branching = 4;
    cfg.seed = 7;
    const Forest forest = build_forest(matrix, cfg);
    const ScoreResult result = score_all(matrix, forest);
    for (const double s : result.scores) {
        CHECK(s > 0.0);
        CHECK(s <= 1.0);
    }
    CHECK(result.scores.front() == result.scores.back());
}

TEST_CASE("voronoi_split contracts") {
    Rng rng(49);
    std::vector<PreferenceVector> points;
    for (int i = 0; i < 12; ++i) points.push_back(random_preference(10, 0.6, rng));

    SUBCASE("b equal to point count gives singleton cells") {
        const auto cells = voronoi_split(points, 12, DistanceKind::kRuzicka, rng);
        REQUIRE(cells.size() == 12);
        for (const auto& cell : cells) CHECK(cell.size() == 1);
    }

    SUBCASE("cells are nonempty and partition the points") {
        const auto cells = voronoi_split(points, 4, DistanceKind::kTanimoto, rng);
        REQUIRE(cells.size() == 4);
        std::set<std::size_t> seen;
        for (const auto& cell : cells) {
            CHECK(!cell.empty());
            for (const auto p : cell) seen.insert(p);
        }
        CHECK(seen.size() == points.size());
    }

    SUBCASE("identical points collapse onto the first center") {
        std::vector<PreferenceVector> same(8, pv({0.5, 0.5, 0.0}));
        const auto cells = voronoi_split(same, 2, DistanceKind::kRuzicka, rng);
        // both centers keep their own cell; everything else ties to center 0
        CHECK(cells[0].size() == 7);
        CHECK(cells[1].size() == 1);
    }

    SUBCASE("two separated clusters split cleanly when centers straddle them") {
        std::vector<PreferenceVector> grouped;
        for (int i = 0; i < 6; ++i) grouped.push_back(pv({1.0, 0.9, 0.0, 0.0}));
        for (int i = 0; i < 6; ++i) grouped.push_back(pv({0.0, 0.0, 0.9, 1.0}));
        bool saw_straddling_centers = false;
        for (int trial = 0; trial < 50; ++trial) {
            const auto cells = voronoi_split(grouped, 2, DistanceKind::kRuzicka, rng);
            if (cells[0].size() != 6) continue;  // both centers fell in one cluster
            saw_straddling_centers = true;
            for (const auto& cell : cells) {
                const bool low = cell.front() < 6;
                for (const auto p : cell) CHECK((p < 6) == low);
            }
        }
        CHECK(saw_straddling_centers);
    }

    SUBCASE("too few points is a precondition violation") {
        CHECK_THROWS_AS(voronoi_split(std::span<const PreferenceVector>(points.data(), 3), 4,
                                      DistanceKind::kRuzicka, rng),
                        InvalidArgumentError);
    }
}

TEST_CASE("voronoi trees keep at least one point per child") {
    Rng data_rng(50);
    std::vector<PreferenceVector> sub;
    for (int i = 0; i < 128; ++i) sub.push_back(random_preference(24, 0.4, data_rng));
    ForestConfig cfg;
    cfg.scheme = SplitScheme::kVoronoi;
    cfg.voronoi_distance = DistanceKind::kTanimoto;
    cfg.branching = 4;
    cfg.psi = 128;
    Rng rng(51);
    const Tree tree = build_tree(sub, cfg, rng);
    const auto walk = [&](const TreeNode& node, const auto& self) -> void {
        if (node.is_leaf()) return;
        for (const auto& child : node.children) {
            CHECK(child->size >= 1);
            self(*child, self);
        }
    };
    walk(tree.root(), walk);
}

TEST_CASE("voronoi forests collapse to one level at high branching") {
    Rng data_rng(52);
    PreferenceMatrix matrix;
    matrix.dim = 400;
    for (int i = 0; i < 300; ++i) matrix.rows.push_back(random_preference(400, 0.2, data_rng));

    for (const std::uint32_t b : {32u, 64u}) {
        ForestConfig cfg;
        cfg.trees = 10;
        cfg.psi = 256;
        cfg.branching = b;
        cfg.scheme = SplitScheme::kVoronoi;
        cfg.voronoi_distance = DistanceKind::kRuzicka;
        cfg.seed = b;
        const Forest forest = build_forest(matrix, cfg);
        for (const Tree& tree : forest.trees()) {
            CHECK(tree.max_depth() == 1);
            CHECK_FALSE(tree.root().is_leaf());
        }
    }
}

TEST_CASE("per-point test cost respects the counter bounds") {
    Rng data_rng(53);
    PreferenceMatrix matrix;
    matrix.dim = 64;
    for (int i = 0; i < 256; ++i) matrix.rows.push_back(random_preference(64, 0.3, data_rng));

    const std::size_t t = 15;
    const std::uint32_t b = 4;
    const std::size_t cap = max_tree_depth(256, b);

    ForestConfig cfg;
    cfg.trees = t;
    cfg.psi = 256;
    cfg.branching = b;
    cfg.seed = 3;

    SUBCASE("hashing forest: at most t * cap rule lookups per point") {
        const Forest forest = build_forest(matrix, cfg);
        PreferenceMatrix one;
        one.dim = matrix.dim;
        one.rows = {matrix.rows.front()};
        const ScoreResult result = score_all(one, forest);
        CHECK(result.counters.rule_evals <= t * cap);
        CHECK(result.counters.rule_evals >= t);
        CHECK(result.counters.distance_evals == 0);
    }

    SUBCASE("voronoi forest: at most t * b * cap distance lookups per point") {
        cfg.scheme = SplitScheme::kVoronoi;
        const Forest forest = build_forest(matrix, cfg);
        PreferenceMatrix one;
        one.dim = matrix.dim;
        one.rows = {matrix.rows.front()};
        const ScoreResult result = score_all(one, forest);
        CHECK(result.counters.distance_evals <= t * b * cap);
        CHECK(result.counters.distance_evals >= t * b);
        CHECK(result.counters.rule_evals == 0);
    }
}

TEST_CASE("a disjoint-support point isolates early") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(seed);
        const PreferenceMatrix matrix = clustered_matrix(60, 50, 1, rng);

        ForestConfig cfg;
        cfg.trees = 50;
        cfg.psi = 101;
        cfg.branching = 4;
        cfg.seed = derive_seed(seed, 0xf0);
        const Forest forest = build_forest(matrix, cfg);

        OpCounters ignored;
        double loner_height = 0.0;
        double total_height = 0.0;
        for (std::size_t i = 0; i < matrix.size(); ++i) {
            double mean = 0.0;
            for (const Tree& tree : forest.trees()) mean += tree.height(matrix.rows[i], ignored);
            mean /= static_cast<double>(forest.trees().size());
            total_height += mean;
            if (i == matrix.size() - 1) loner_height = mean;
        }
        CHECK(loner_height < total_height / static_cast<double>(matrix.size()));
    }
}

TEST_CASE("config validation rejects bad parameters") {
    PreferenceMatrix matrix;
    matrix.dim = 4;
    matrix.rows = {pv({1, 0, 0, 0}), pv({0, 1, 0, 0})};
    ForestConfig cfg;
    cfg.branching = 8;  // exceeds dimension for the hashing scheme
    CHECK_THROWS_AS(build_forest(matrix, cfg), InvalidArgumentError);
    cfg.branching = 1;
    CHECK_THROWS_AS(build_forest(matrix, cfg), InvalidArgumentError);
    cfg.branching = 2;
    cfg.trees = 0;
    CHECK_THROWS_AS(build_forest(matrix, cfg), InvalidArgumentError);
}
