#include "prefspace/geometry.hpp"

#include <cmath>

#include "prefspace/errors.hpp"

namespace prefspace {

namespace {

constexpr double kDegenerateTol = 1e-12;

}  // namespace

std::size_t minimal_sample_size(ModelFamily family) {
    return family == ModelFamily::kLines ? 2 : 3;
}

Line fit_line(Point2 p1, Point2 p2) {
    const double dx = p2.x - p1.x;
    const double dy = p2.y - p1.y;
    const double norm = std::hypot(dx, dy);
    if (norm < kDegenerateTol) {
        throw DegenerateSampleError("coincident points do not determine a line");
    }
    Line line;
    line.a = -dy / norm;
    line.b = dx / norm;
    line.c = -(line.a * p1.x + line.b * p1.y);
    return line;
}

Circle fit_circle(Point2 p1, Point2 p2, Point2 p3) {
    // Center solves the 2x2 system  2*(p2-p1).c = |p2|^2-|p1|^2,
    //                               2*(p3-p1).c = |p3|^2-|p1|^2.
    const double ax = 2.0 * (p2.x - p1.x);
    const double ay = 2.0 * (p2.y - p1.y);
    const double bx = 2.0 * (p3.x - p1.x);
    const double by = 2.0 * (p3.y - p1.y);
    const double det = ax * by - ay * bx;
    if (std::abs(det) < kDegenerateTol) {
        throw DegenerateSampleError("collinear points do not determine a circle");
    }
    const double r1 = p2.x * p2.x - p1.x * p1.x + p2.y * p2.y - p1.y * p1.y;
    const double r2 = p3.x * p3.x - p1.x * p1.x + p3.y * p3.y - p1.y * p1.y;
    Circle circle;
    circle.center.x = (r1 * by - r2 * ay) / det;
    circle.center.y = (ax * r2 - bx * r1) / det;
    circle.radius = std::hypot(p1.x - circle.center.x, p1.y - circle.center.y);
    return circle;
}

double signed_residual(const StructureModel& model, Point2 point) {
    if (const auto* line = std::get_if<Line>(&model)) {
        return line->a * point.x + line->b * point.y + line->c;
    }
    const auto& circle = std::get<Circle>(model);
    return std::hypot(point.x - circle.center.x, point.y - circle.center.y) - circle.radius;
}

double residual(const StructureModel& model, Point2 point) {
    return std::abs(signed_residual(model, point));
}

ModelPool sample_pool(const Dataset& data, std::size_t count, ModelFamily family, Rng& rng) {
    if (count == 0) throw InvalidArgumentError("pool size must be at least 1");
    const std::size_t needed =
        family == ModelFamily::kMixed ? 3 : minimal_sample_size(family);
    if (data.size() < needed) {
        throw InvalidArgumentError("dataset too small for the chosen model family");
    }

    const auto n = static_cast<std::uint32_t>(data.size());
    const std::size_t max_failures = 100 * count;
    std::size_t consecutive_failures = 0;

    ModelPool pool;
    pool.models.reserve(count);
    while (pool.models.size() < count) {
        const ModelFamily kind = family != ModelFamily::kMixed ? family
                                 : (rng.below(2) == 0 ? ModelFamily::kLines
                                                      : ModelFamily::kCircles);
        const auto sample =
            rng.sample_without_replacement(n, static_cast<std::uint32_t>(minimal_sample_size(kind)));
        try {
            if (kind == ModelFamily::kLines) {
                pool.models.emplace_back(fit_line(data.points[sample[0]], data.points[sample[1]]));
            } else {
                pool.models.emplace_back(
                    fit_circle(data.points[sample[0]], data.points[sample[1]], data.points[sample[2]]));
            }
            consecutive_failures = 0;
        } catch (const DegenerateSampleError&) {
            if (++consecutive_failures >= max_failures) {
                throw PoolExhaustedError("too many consecutive degenerate minimal samples");
            }
        }
    }
    return pool;
}

}  // namespace prefspace
