#pragma once

// Shared generators and independent reference implementations used as oracles
// by the unit and acceptance suites. Everything here works on dense vectors
// and plain loops on purpose: it must not share code paths with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "prefspace/embedding.hpp"
#include "prefspace/random.hpp"

namespace testsupport {

inline double ruzicka_dense(const std::vector<double>& p, const std::vector<double>& q) {
    double min_sum = 0.0;
    double max_sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        min_sum += std::min(p[i], q[i]);
        max_sum += std::max(p[i], q[i]);
    }
    if (max_sum <= 0.0) return 0.0;
    return 1.0 - min_sum / max_sum;
}

inline double tanimoto_dense(const std::vector<double>& p, const std::vector<double>& q) {
    double dot = 0.0;
    double np = 0.0;
    double nq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        dot += p[i] * q[i];
        np += p[i] * p[i];
        nq += q[i] * q[i];
    }
    const double denom = np + nq - dot;
    if (denom <= 0.0) return 0.0;
    return 1.0 - dot / denom;
}

inline double jaccard_dense(const std::vector<double>& p, const std::vector<double>& q) {
    std::size_t shared = 0;
    std::size_t unions = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const bool a = p[i] > 0.0;
        const bool b = q[i] > 0.0;
        shared += a && b;
        unions += a || b;
    }
    if (unions == 0) return 0.0;
    return 1.0 - static_cast<double>(shared) / static_cast<double>(unions);
}

/// Dense random vector in [0,1]^dim with roughly `fill` nonzero components.
inline std::vector<double> random_dense_vector(std::uint32_t dim, double fill,
                                               prefspace::Rng& rng) {
    std::vector<double> values(dim, 0.0);
    for (auto& v : values) {
        if (rng.uniform01() < fill) v = rng.uniform01();
    }
    return values;
}

inline std::vector<double> random_binary_vector(std::uint32_t dim, double fill,
                                                prefspace::Rng& rng) {
    std::vector<double> values(dim, 0.0);
    for (auto& v : values) {
        if (rng.uniform01() < fill) v = 1.0;
    }
    return values;
}

inline prefspace::PreferenceVector random_preference(std::uint32_t dim, double fill,
                                                     prefspace::Rng& rng) {
    return prefspace::PreferenceVector::from_dense(random_dense_vector(dim, fill, rng));
}

/// O(n^2) pair-counting ROC AUC (ties count half), the oracle for the
/// rank-based implementation.
inline double auc_by_pairs(const std::vector<double>& scores,
                           const std::vector<prefspace::Label>& labels) {
    double concordant = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != prefspace::Label::kAnomaly) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != prefspace::Label::kGenuine) continue;
            ++pairs;
            if (scores[i] > scores[j]) {
                concordant += 1.0;
            } else if (scores[i] == scores[j]) {
                concordant += 0.5;
            }
        }
    }
    return concordant / static_cast<double>(pairs);
}

inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace testsupport
