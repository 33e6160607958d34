#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "prefspace/random.hpp"

namespace prefspace {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

enum class Label : std::uint8_t { kGenuine = 0, kAnomaly = 1 };

/// Ambient-space points with per-point genuine/anomaly labels.
struct Dataset {
    std::vector<Point2> points;
    std::vector<Label> labels;

    std::size_t size() const { return points.size(); }
};

/// Line a*x + b*y + c = 0 with unit normal (a, b).
struct Line {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

struct Circle {
    Point2 center;
    double radius = 0.0;
};

using StructureModel = std::variant<Line, Circle>;

/// Which parametric family (or mix) pool sampling and scene generation draw from.
enum class ModelFamily : std::uint8_t { kLines, kCircles, kMixed };

struct ModelPool {
    std::vector<StructureModel> models;

    std::size_t size() const { return models.size(); }
};

/// Number of points that constrain one model of the family (2 for lines, 3 for circles).
std::size_t minimal_sample_size(ModelFamily family);

/// Line through two distinct points. Throws DegenerateSampleError when the
/// points coincide within 1e-12.
Line fit_line(Point2 p1, Point2 p2);

/// Circumcircle of three non-collinear points. Throws DegenerateSampleError
/// when the circumcircle system determinant falls below 1e-12.
Circle fit_circle(Point2 p1, Point2 p2, Point2 p3);

/// Signed offset of a point from a model: signed orthogonal distance for a
/// line, ||x - center|| - radius for a circle.
double signed_residual(const StructureModel& model, Point2 point);

/// Absolute residual |signed_residual|.
double residual(const StructureModel& model, Point2 point);

/// Fit `count` models, each from a uniformly drawn minimal sample set of
/// distinct dataset points. Degenerate draws are resampled; after 100 * count
/// consecutive failures the call throws PoolExhaustedError. kMixed picks the
/// family of each model with a fair coin.
ModelPool sample_pool(const Dataset& data, std::size_t count, ModelFamily family, Rng& rng);

}  // namespace prefspace
