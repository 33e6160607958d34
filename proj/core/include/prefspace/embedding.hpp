#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "prefspace/geometry.hpp"

namespace prefspace {

enum class PreferenceMode : std::uint8_t { kContinuous, kBinary };

/// Inlier model for the embedding: a point prefers a model when its residual
/// is within epsilon = k * sigma of it.
struct EmbeddingConfig {
    double sigma = 0.0;
    double k = 0.0;
    double epsilon = 0.0;  // always k * sigma
    PreferenceMode mode = PreferenceMode::kContinuous;

    EmbeddingConfig(double sigma_in, double k_in, PreferenceMode mode_in);
};

/// One point of the preference space [0,1]^m. Components outside the stored
/// support are exactly zero, so the sparse layout is observationally identical
/// to an m-vector; it just skips the zeros that dominate at m = 10 * n.
class PreferenceVector {
  public:
    PreferenceVector() = default;

    /// `entries` must be sorted by index, strictly increasing, with values in (0, 1].
    PreferenceVector(std::uint32_t dim, std::vector<std::pair<std::uint32_t, double>> entries);

    static PreferenceVector from_dense(const std::vector<double>& values);

    std::uint32_t dim() const { return dim_; }
    std::size_t nnz() const { return indices_.size(); }
    double sum() const { return sum_; }
    double norm_squared() const { return norm_squared_; }

    /// Component lookup, zero off the support.
    double value_at(std::uint32_t index) const;

    const std::vector<std::uint32_t>& indices() const { return indices_; }
    const std::vector<double>& values() const { return values_; }

    std::vector<double> dense() const;

    bool operator==(const PreferenceVector& other) const {
        return dim_ == other.dim_ && indices_ == other.indices_ && values_ == other.values_;
    }

  private:
    std::uint32_t dim_ = 0;
    std::vector<std::uint32_t> indices_;  // sorted, strictly increasing
    std::vector<double> values_;          // aligned with indices_, each in (0, 1]
    double sum_ = 0.0;
    double norm_squared_ = 0.0;
};

/// Row-aligned preference embedding of a whole dataset.
struct PreferenceMatrix {
    std::uint32_t dim = 0;
    std::vector<PreferenceVector> rows;

    std::size_t size() const { return rows.size(); }
};

/// Preference granted to a model at residual `delta`: zero outside the inlier
/// band |delta| <= epsilon, exp(-0.5 * (delta/sigma)^2) inside (1 in binary mode).
double preference_value(double delta, const EmbeddingConfig& cfg);

/// Component i of the embedded point is preference_value(residual(model_i, x)).
PreferenceVector embed_point(Point2 point, const ModelPool& pool, const EmbeddingConfig& cfg);

PreferenceMatrix embed_dataset(const Dataset& data, const ModelPool& pool,
                               const EmbeddingConfig& cfg);

}  // namespace prefspace
