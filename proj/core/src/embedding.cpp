#include "prefspace/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "prefspace/errors.hpp"

namespace prefspace {

EmbeddingConfig::EmbeddingConfig(double sigma_in, double k_in, PreferenceMode mode_in)
    : sigma(sigma_in), k(k_in), epsilon(k_in * sigma_in), mode(mode_in) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InvalidArgumentError("embedding sigma must be positive and finite");
    }
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw InvalidArgumentError("embedding k must be positive and finite");
    }
}

PreferenceVector::PreferenceVector(std::uint32_t dim,
                                   std::vector<std::pair<std::uint32_t, double>> entries)
    : dim_(dim) {
    indices_.reserve(entries.size());
    values_.reserve(entries.size());
    std::uint32_t previous = 0;
    bool first = true;
    for (const auto& [index, value] : entries) {
        if (!first && index <= previous) {
            throw InvalidArgumentError("preference entries must have strictly increasing indices");
        }
        if (index >= dim) throw InvalidArgumentError("preference entry index out of range");
        if (!(value > 0.0) || value > 1.0 || !std::isfinite(value)) {
            throw InvalidArgumentError("preference values must lie in (0, 1]");
        }
        indices_.push_back(index);
        values_.push_back(value);
        sum_ += value;
        norm_squared_ += value * value;
        previous = index;
        first = false;
    }
}

PreferenceVector PreferenceVector::from_dense(const std::vector<double>& values) {
    std::vector<std::pair<std::uint32_t, double>> entries;
    for (std::uint32_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0 || values[i] > 1.0 || !std::isfinite(values[i])) {
            throw InvalidArgumentError("preference components must lie in [0, 1]");
        }
        if (values[i] > 0.0) entries.emplace_back(i, values[i]);
    }
    return PreferenceVector(static_cast<std::uint32_t>(values.size()), std::move(entries));
}

double PreferenceVector::value_at(std::uint32_t index) const {
    const auto it = std::lower_bound(indices_.begin(), indices_.end(), index);
    if (it == indices_.end() || *it != index) return 0.0;
    return values_[static_cast<std::size_t>(it - indices_.begin())];
}

std::vector<double> PreferenceVector::dense() const {
    std::vector<double> out(dim_, 0.0);
    for (std::size_t i = 0; i < indices_.size(); ++i) out[indices_[i]] = values_[i];
    return out;
}

double preference_value(double delta, const EmbeddingConfig& cfg) {
    if (std::abs(delta) > cfg.epsilon) return 0.0;
    if (cfg.mode == PreferenceMode::kBinary) return 1.0;
    const double z = delta / cfg.sigma;
    return std::exp(-0.5 * z * z);
}

PreferenceVector embed_point(Point2 point, const ModelPool& pool, const EmbeddingConfig& cfg) {
    if (pool.size() == 0) throw InvalidArgumentError("model pool is empty");
    std::vector<std::pair<std::uint32_t, double>> entries;
    for (std::uint32_t i = 0; i < pool.size(); ++i) {
        const double value = preference_value(residual(pool.models[i], point), cfg);
        if (value > 0.0) entries.emplace_back(i, value);
    }
    return PreferenceVector(static_cast<std::uint32_t>(pool.size()), std::move(entries));
}

PreferenceMatrix embed_dataset(const Dataset& data, const ModelPool& pool,
                               const EmbeddingConfig& cfg) {
    PreferenceMatrix matrix;
    matrix.dim = static_cast<std::uint32_t>(pool.size());
    matrix.rows.reserve(data.size());
    for (const Point2& point : data.points) {
        matrix.rows.push_back(embed_point(point, pool, cfg));
    }
    return matrix;
}

}  // namespace prefspace
