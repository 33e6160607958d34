#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "prefspace/datagen.hpp"
#include "prefspace/errors.hpp"
#include "prefspace/eval.hpp"

using namespace prefspace;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("prefspace_test_" + name);
}

}  // namespace

TEST_CASE("generate honors counts and the anomaly ratio") {
    SyntheticSpec spec;
    spec.structures = 2;
    spec.points_per_structure = 125;
    spec.anomaly_ratio = 0.5;
    spec.seed = 1;
    const Scene scene = generate(spec);

    std::size_t genuine = 0;
    std::size_t anomalies = 0;
    for (const Label label : scene.data.labels) {
        (label == Label::kGenuine ? genuine : anomalies) += 1;
    }
    CHECK(genuine == 250);
    CHECK(anomalies == 250);  // ratio 0.5 means |A| = |G|
    CHECK(scene.structures.size() == 2);

    SyntheticSpec third = spec;
    third.anomaly_ratio = 0.25;
    const Scene quarter = generate(third);
    std::size_t quarter_anomalies = 0;
    for (const Label label : quarter.data.labels) quarter_anomalies += label == Label::kAnomaly;
    // |A| / (|A| + 250) = 0.25 after rounding
    CHECK(quarter_anomalies == 83);
}

TEST_CASE("generate is deterministic in the seed") {
    SyntheticSpec spec;
    spec.seed = 9;
    const Scene a = generate(spec);
    const Scene b = generate(spec);
    REQUIRE(a.data.size() == b.data.size());
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        CHECK(a.data.points[i].x == b.data.points[i].x);
        CHECK(a.data.points[i].y == b.data.points[i].y);
        CHECK(a.data.labels[i] == b.data.labels[i]);
    }
    spec.seed = 10;
    const Scene c = generate(spec);
    CHECK(a.data.points[0].x != c.data.points[0].x);
}

TEST_CASE("zero noise puts genuine points exactly on their structures") {
    SyntheticSpec spec;
    spec.sigma = 0.0;
    spec.seed = 3;
    for (const ModelFamily kind : {ModelFamily::kLines, ModelFamily::kCircles, ModelFamily::kMixed}) {
        spec.kind = kind;
        const Scene scene = generate(spec);
        for (std::size_t i = 0; i < scene.data.size(); ++i) {
            if (scene.data.labels[i] != Label::kGenuine) continue;
            double best = 1e300;
            for (const auto& model : scene.structures) {
                best = std::min(best, residual(model, scene.data.points[i]));
            }
            CHECK(best < 1e-12);
        }
    }
}

TEST_CASE("genuine residual spread matches the requested sigma") {
    SyntheticSpec spec;
    spec.points_per_structure = 600;  // >= 1000 genuine points total
    spec.sigma = 0.05;
    spec.seed = 4;
    const Scene scene = generate(spec);
    const double estimated = estimate_sigma(scene.data, scene.structures);
    CHECK(estimated == doctest::Approx(0.05).epsilon(0.10));
}

TEST_CASE("anomalies stay inside the genuine bounding box") {
    SyntheticSpec spec;
    spec.seed = 5;
    const Scene scene = generate(spec);
    BoundingBox box{1e300, -1e300, 1e300, -1e300};
    for (std::size_t i = 0; i < scene.data.size(); ++i) {
        if (scene.data.labels[i] != Label::kGenuine) continue;
        box.xmin = std::min(box.xmin, scene.data.points[i].x);
        box.xmax = std::max(box.xmax, scene.data.points[i].x);
        box.ymin = std::min(box.ymin, scene.data.points[i].y);
        box.ymax = std::max(box.ymax, scene.data.points[i].y);
    }
    for (std::size_t i = 0; i < scene.data.size(); ++i) {
        if (scene.data.labels[i] != Label::kAnomaly) continue;
        CHECK(scene.data.points[i].x >= box.xmin);
        CHECK(scene.data.points[i].x <= box.xmax);
        CHECK(scene.data.points[i].y >= box.ymin);
        CHECK(scene.data.points[i].y <= box.ymax);
    }
}

TEST_CASE("spec validation") {
    SyntheticSpec spec;
    spec.anomaly_ratio = 1.5;
    CHECK_THROWS_AS(generate(spec), InvalidArgumentError);
    spec.anomaly_ratio = 0.5;
    spec.structures = 0;
    CHECK_THROWS_AS(generate(spec), InvalidArgumentError);
    spec.structures = 1;
    spec.sigma = -0.1;
    CHECK_THROWS_AS(generate(spec), InvalidArgumentError);
}

TEST_CASE("csv round-trip preserves coordinates and labels") {
    SyntheticSpec spec;
    spec.points_per_structure = 40;
    spec.seed = 6;
    const Scene scene = generate(spec);

    const auto path = temp_file("roundtrip.csv");
    save_csv(scene.data, path);
    const Dataset loaded = load_csv(path);
    REQUIRE(loaded.size() == scene.data.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded.points[i].x == scene.data.points[i].x);  // 17 digits: exact
        CHECK(loaded.points[i].y == scene.data.points[i].y);
        CHECK(loaded.labels[i] == scene.data.labels[i]);
    }
    std::filesystem::remove(path);
}

TEST_CASE("csv loader reports malformed input with line numbers") {
    const auto path = temp_file("malformed.csv");

    {
        std::ofstream out(path);
        out << "x,y,label\n0.1,0.2,0\n0.3,0.4\n";
    }
    CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("line 3"), FormatError);

    {
        std::ofstream out(path);
        out << "x,y,label\nfoo,0.2,0\n";
    }
    CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("line 2"), FormatError);

    {
        std::ofstream out(path);
        out << "x,y,label\n0.1,0.2,7\n";
    }
    CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("line 2"), FormatError);

    {
        std::ofstream out(path);
    }
    CHECK_THROWS_AS(load_csv(path), FormatError);  // empty file

    {
        std::ofstream out(path);
        out << "x,y,label\n";
    }
    CHECK_THROWS_AS(load_csv(path), FormatError);  // header only

    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_csv(path), IoError);  // missing file
}

TEST_CASE("structures sidecar round-trips") {
    SyntheticSpec spec;
    spec.kind = ModelFamily::kMixed;
    spec.structures = 3;
    spec.seed = 8;
    const Scene scene = generate(spec);

    const auto path = temp_file("structures.json");
    save_structures(scene.structures, path);
    const auto loaded = load_structures(path);
    REQUIRE(loaded.size() == scene.structures.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded[i].index() == scene.structures[i].index());
        const Point2 probe{0.37, -0.21};
        CHECK(residual(loaded[i], probe) == residual(scene.structures[i], probe));
    }
    std::filesystem::remove(path);
}
