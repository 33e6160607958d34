#include "prefspace/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "prefspace/errors.hpp"
#include "prefspace/random.hpp"

namespace prefspace {

namespace {

constexpr std::uint64_t kNoiseTag = 0x6e6f6973u;
constexpr std::uint64_t kAnomalyTag = 0x616e6f6du;
constexpr std::uint64_t kPlacementTag = 0x706c6163u;

double gaussian(Rng& rng, double sigma) {
    // Box-Muller; one draw per call keeps the stream layout simple.
    double u1 = rng.uniform01();
    while (u1 <= 0.0) u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

void validate(const SyntheticSpec& spec) {
    if (spec.structures < 1) throw InvalidArgumentError("scene needs at least one structure");
    if (spec.points_per_structure < 1) {
        throw InvalidArgumentError("scene needs at least one point per structure");
    }
    if (!(spec.sigma >= 0.0)) throw InvalidArgumentError("noise sigma must be nonnegative");
    if (!(spec.anomaly_ratio > 0.0) || !(spec.anomaly_ratio < 1.0)) {
        throw InvalidArgumentError("anomaly ratio must lie strictly between 0 and 1");
    }
    if (!(spec.bbox.width() > 0.0) || !(spec.bbox.height() > 0.0)) {
        throw InvalidArgumentError("bounding box must have positive extent");
    }
}

std::vector<StructureModel> scene_lines(const BoundingBox& box, std::size_t count) {
    // Evenly fanned chords through the box center; two structures give the
    // diagonal X arrangement.
    const Point2 center{(box.xmin + box.xmax) / 2.0, (box.ymin + box.ymax) / 2.0};
    std::vector<StructureModel> structures;
    structures.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double angle =
            std::numbers::pi * (2.0 * static_cast<double>(i) + 1.0) / (2.0 * static_cast<double>(count));
        const Point2 direction{std::cos(angle), std::sin(angle)};
        structures.push_back(fit_line(center, {center.x + direction.x, center.y + direction.y}));
    }
    return structures;
}

std::vector<StructureModel> scene_circles(const BoundingBox& box, std::size_t count) {
    // Overlapping circles spaced along the horizontal midline.
    const double cy = (box.ymin + box.ymax) / 2.0;
    const double shorter = std::min(box.width(), box.height());
    const double radius =
        count == 1 ? 0.35 * shorter : std::max(box.width() / (2.0 * static_cast<double>(count)),
                                               0.3 * shorter);
    std::vector<StructureModel> structures;
    structures.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        double cx = (box.xmin + box.xmax) / 2.0;
        if (count > 1) {
            const double lo = box.xmin + radius;
            const double hi = box.xmax - radius;
            cx = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        }
        structures.push_back(Circle{{cx, cy}, radius});
    }
    return structures;
}

std::vector<StructureModel> scene_structures(const SyntheticSpec& spec) {
    switch (spec.kind) {
        case ModelFamily::kLines: return scene_lines(spec.bbox, spec.structures);
        case ModelFamily::kCircles: return scene_circles(spec.bbox, spec.structures);
        case ModelFamily::kMixed: {
            const std::size_t line_count = (spec.structures + 1) / 2;
            const std::size_t circle_count = spec.structures / 2;
            auto structures = scene_lines(spec.bbox, line_count);
            if (circle_count > 0) {
                auto circles = scene_circles(spec.bbox, circle_count);
                structures.insert(structures.end(), circles.begin(), circles.end());
            }
            return structures;
        }
    }
    throw InvalidArgumentError("unknown scene kind");
}

Point2 point_on_structure(const StructureModel& model, const BoundingBox& box, Rng& placement) {
    if (const auto* line = std::get_if<Line>(&model)) {
        // Uniform along the chord the line cuts through the box.
        const Point2 center{(box.xmin + box.xmax) / 2.0, (box.ymin + box.ymax) / 2.0};
        const Point2 direction{line->b, -line->a};
        double reach = std::numeric_limits<double>::infinity();
        if (direction.x != 0.0) reach = std::min(reach, (box.width() / 2.0) / std::abs(direction.x));
        if (direction.y != 0.0) reach = std::min(reach, (box.height() / 2.0) / std::abs(direction.y));
        const double t = (2.0 * placement.uniform01() - 1.0) * reach;
        return {center.x + t * direction.x, center.y + t * direction.y};
    }
    const auto& circle = std::get<Circle>(model);
    const double angle = 2.0 * std::numbers::pi * placement.uniform01();
    return {circle.center.x + circle.radius * std::cos(angle),
            circle.center.y + circle.radius * std::sin(angle)};
}

Point2 offset_perpendicular(const StructureModel& model, Point2 on_structure, double amount) {
    if (const auto* line = std::get_if<Line>(&model)) {
        return {on_structure.x + amount * line->a, on_structure.y + amount * line->b};
    }
    const auto& circle = std::get<Circle>(model);
    const double dx = on_structure.x - circle.center.x;
    const double dy = on_structure.y - circle.center.y;
    const double norm = std::hypot(dx, dy);
    return {on_structure.x + amount * dx / norm, on_structure.y + amount * dy / norm};
}

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

}  // namespace

Scene generate(const SyntheticSpec& spec) {
    validate(spec);

    Scene scene;
    scene.structures = scene_structures(spec);

    Rng placement(derive_seed(spec.seed, kPlacementTag));
    Rng noise(derive_seed(spec.seed, kNoiseTag));
    for (const StructureModel& model : scene.structures) {
        for (std::size_t i = 0; i < spec.points_per_structure; ++i) {
            const Point2 base = point_on_structure(model, spec.bbox, placement);
            scene.data.points.push_back(
                offset_perpendicular(model, base, gaussian(noise, spec.sigma)));
            scene.data.labels.push_back(Label::kGenuine);
        }
    }

    // Anomalies are uniform over the range of the genuine points.
    BoundingBox range{scene.data.points.front().x, scene.data.points.front().x,
                      scene.data.points.front().y, scene.data.points.front().y};
    for (const Point2& p : scene.data.points) {
        range.xmin = std::min(range.xmin, p.x);
        range.xmax = std::max(range.xmax, p.x);
        range.ymin = std::min(range.ymin, p.y);
        range.ymax = std::max(range.ymax, p.y);
    }

    const auto genuine_count = static_cast<double>(scene.data.points.size());
    const auto anomaly_count = static_cast<std::size_t>(
        std::llround(genuine_count * spec.anomaly_ratio / (1.0 - spec.anomaly_ratio)));
    Rng anomalies(derive_seed(spec.seed, kAnomalyTag));
    for (std::size_t i = 0; i < anomaly_count; ++i) {
        scene.data.points.push_back({range.xmin + range.width() * anomalies.uniform01(),
                                     range.ymin + range.height() * anomalies.uniform01()});
        scene.data.labels.push_back(Label::kAnomaly);
    }
    return scene;
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "x,y,label\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << format_double(data.points[i].x) << ',' << format_double(data.points[i].y) << ','
            << (data.labels[i] == Label::kAnomaly ? '1' : '0') << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

namespace {

double parse_double(const std::string& field, std::size_t line_number) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &consumed);
    } catch (const std::exception&) {
        throw FormatError("non-numeric coordinate on line " + std::to_string(line_number));
    }
    if (consumed != field.size() || !std::isfinite(value)) {
        throw FormatError("non-numeric coordinate on line " + std::to_string(line_number));
    }
    return value;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");

    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty dataset file " + path.string());
    if (line == "x,y,label\r") line.pop_back();
    if (line != "x,y,label") throw FormatError("missing `x,y,label` header on line 1");

    Dataset data;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::stringstream row(line);
        std::string field;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 3) {
            throw FormatError("expected 3 columns on line " + std::to_string(line_number));
        }
        const double x = parse_double(fields[0], line_number);
        const double y = parse_double(fields[1], line_number);
        if (fields[2] != "0" && fields[2] != "1") {
            throw FormatError("label must be 0 or 1 on line " + std::to_string(line_number));
        }
        data.points.push_back({x, y});
        data.labels.push_back(fields[2] == "1" ? Label::kAnomaly : Label::kGenuine);
    }
    if (data.size() == 0) throw FormatError("dataset file " + path.string() + " has no rows");
    return data;
}

void save_structures(std::span<const StructureModel> structures,
                     const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["schema"] = 1;
    doc["structures"] = nlohmann::json::array();
    for (const StructureModel& model : structures) {
        nlohmann::json entry;
        if (const auto* line = std::get_if<Line>(&model)) {
            entry["kind"] = "line";
            entry["a"] = line->a;
            entry["b"] = line->b;
            entry["c"] = line->c;
        } else {
            const auto& circle = std::get<Circle>(model);
            entry["kind"] = "circle";
            entry["cx"] = circle.center.x;
            entry["cy"] = circle.center.y;
            entry["r"] = circle.radius;
        }
        doc["structures"].push_back(std::move(entry));
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

std::vector<StructureModel> load_structures(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("invalid structures file " + path.string() + ": " + e.what());
    }
    std::vector<StructureModel> structures;
    try {
        for (const auto& entry : doc.at("structures")) {
            const std::string kind = entry.at("kind").get<std::string>();
            if (kind == "line") {
                structures.push_back(Line{entry.at("a").get<double>(), entry.at("b").get<double>(),
                                          entry.at("c").get<double>()});
            } else if (kind == "circle") {
                structures.push_back(Circle{{entry.at("cx").get<double>(),
                                             entry.at("cy").get<double>()},
                                            entry.at("r").get<double>()});
            } else {
                throw FormatError("unknown structure kind `" + kind + "` in " + path.string());
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("invalid structures file " + path.string() + ": " + e.what());
    }
    return structures;
}

}  // namespace prefspace
