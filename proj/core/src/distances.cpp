#include "prefspace/distances.hpp"

#include <algorithm>

#include "prefspace/errors.hpp"

namespace prefspace {

namespace {

void check_dims(const PreferenceVector& p, const PreferenceVector& q) {
    if (p.dim() != q.dim()) throw InvalidArgumentError("preference vectors have different dimensions");
}

/// Accumulate f(p_i, q_i) over the intersection of the supports. Off-support
/// components are zero, so min/dot terms vanish outside the intersection.
template <typename Fn>
double over_intersection(const PreferenceVector& p, const PreferenceVector& q, Fn f) {
    const auto& pi = p.indices();
    const auto& qi = q.indices();
    double acc = 0.0;
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < pi.size() && b < qi.size()) {
        if (pi[a] < qi[b]) {
            ++a;
        } else if (pi[a] > qi[b]) {
            ++b;
        } else {
            acc += f(p.values()[a], q.values()[b]);
            ++a;
            ++b;
        }
    }
    return acc;
}

}  // namespace

const char* distance_name(DistanceKind kind) {
    switch (kind) {
        case DistanceKind::kRuzicka: return "ruzicka";
        case DistanceKind::kTanimoto: return "tanimoto";
        case DistanceKind::kJaccard: return "jaccard";
    }
    return "?";
}

double ruzicka(const PreferenceVector& p, const PreferenceVector& q) {
    check_dims(p, q);
    const double min_sum = over_intersection(p, q, [](double a, double b) { return std::min(a, b); });
    // max(p_i, q_i) summed over the union equals sum(p) + sum(q) - min_sum.
    const double max_sum = p.sum() + q.sum() - min_sum;
    if (max_sum <= 0.0) return 0.0;
    return 1.0 - min_sum / max_sum;
}

double tanimoto(const PreferenceVector& p, const PreferenceVector& q) {
    check_dims(p, q);
    const double dot = over_intersection(p, q, [](double a, double b) { return a * b; });
    const double denom = p.norm_squared() + q.norm_squared() - dot;
    if (denom <= 0.0) return 0.0;
    return 1.0 - dot / denom;
}

double jaccard(const PreferenceVector& p, const PreferenceVector& q) {
    check_dims(p, q);
    const auto& pi = p.indices();
    const auto& qi = q.indices();
    std::size_t shared = 0;
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < pi.size() && b < qi.size()) {
        if (pi[a] < qi[b]) {
            ++a;
        } else if (pi[a] > qi[b]) {
            ++b;
        } else {
            ++shared;
            ++a;
            ++b;
        }
    }
    const std::size_t unions = pi.size() + qi.size() - shared;
    if (unions == 0) return 0.0;
    return 1.0 - static_cast<double>(shared) / static_cast<double>(unions);
}

double distance(DistanceKind kind, const PreferenceVector& p, const PreferenceVector& q) {
    switch (kind) {
        case DistanceKind::kRuzicka: return ruzicka(p, q);
        case DistanceKind::kTanimoto: return tanimoto(p, q);
        case DistanceKind::kJaccard: return jaccard(p, q);
    }
    throw InvalidArgumentError("unknown distance kind");
}

}  // namespace prefspace
