#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "prefspace/embedding.hpp"
#include "prefspace/random.hpp"

namespace prefspace {

/// Per-dimension binarization thresholds, each uniform in [0, 1).
struct ThresholdVector {
    std::vector<double> tau;

    std::uint32_t dim() const { return static_cast<std::uint32_t>(tau.size()); }
};

/// Result of thresholding a preference vector; stores the set dimensions.
struct BinaryVector {
    std::uint32_t dim = 0;
    std::vector<std::uint32_t> ones;  // sorted, strictly increasing

    bool test(std::uint32_t index) const;
};

/// Random order over dimensions used for MinHash bucketing.
class DimensionPermutation {
  public:
    explicit DimensionPermutation(std::vector<std::uint32_t> order);

    static DimensionPermutation sampled(std::uint32_t dim, Rng& rng);

    std::uint32_t dim() const { return static_cast<std::uint32_t>(order_.size()); }
    const std::vector<std::uint32_t>& order() const { return order_; }
    /// Position of a dimension within the order (0 = checked first).
    std::uint32_t rank(std::uint32_t dimension) const { return rank_[dimension]; }

  private:
    std::vector<std::uint32_t> order_;
    std::vector<std::uint32_t> rank_;
};

ThresholdVector sample_thresholds(std::uint32_t dim, Rng& rng);

/// Componentwise strict comparison: bit i set iff p_i > tau_i. Zero components
/// never set a bit, and binary vectors reproduce themselves for any tau in [0,1).
BinaryVector binarize(const PreferenceVector& p, const ThresholdVector& tau);

/// First dimension in permutation order whose bit is set; nullopt for the
/// all-zero vector (the "empty" bucket).
std::optional<std::uint32_t> minhash_bucket(const BinaryVector& bits,
                                            const DimensionPermutation& perm);

/// One node's split: threshold binarization, MinHash bucketing, and a balanced
/// aggregation of the m buckets into `branches` groups. Everything is derived
/// on the fly from a 64-bit seed, so a rule costs O(1) memory no matter how
/// large the preference space is. thresholds()/permutation()/group_map()
/// materialize the exact same functions for inspection and tests.
class SplitRule {
  public:
    SplitRule(std::uint64_t seed, std::uint32_t dim, std::uint32_t branches);

    std::uint32_t dim() const { return dim_; }
    std::uint32_t branches() const { return branches_; }
    std::uint64_t seed() const { return seed_; }

    double threshold(std::uint32_t dimension) const;
    /// MinHash key of a dimension; sorting dimensions by (key, index) yields
    /// the permutation this rule uses.
    std::uint64_t rank_word(std::uint32_t dimension) const;
    /// Balanced bucket aggregation: residue class of a pseudorandom bijection.
    std::uint32_t group_of(std::uint32_t bucket) const;
    /// Group receiving points that binarize to the all-zero vector.
    std::uint32_t empty_group() const;

    /// Bucket of a point under this rule's thresholds and permutation.
    std::optional<std::uint32_t> bucket_of(const PreferenceVector& p) const;
    /// Group the point is routed to; the composition group_of(bucket_of(p)).
    std::uint32_t route(const PreferenceVector& p) const;

    ThresholdVector thresholds() const;
    DimensionPermutation permutation() const;
    /// group_map()[d] == group_of(d) for every bucket dimension d.
    std::vector<std::uint32_t> group_map() const;

  private:
    std::uint64_t seed_ = 0;
    std::uint64_t tau_stream_ = 0;
    std::uint64_t rank_stream_ = 0;
    std::uint64_t group_stream_ = 0;
    std::uint32_t dim_ = 0;
    std::uint32_t branches_ = 0;
};

SplitRule make_split_rule(std::uint32_t dim, std::uint32_t branches, Rng& rng);

/// Partition points into `branches` lists of positions (some possibly empty).
std::vector<std::vector<std::size_t>> apply_split(std::span<const PreferenceVector> points,
                                                  const SplitRule& rule);

/// Sampling estimator of the Ruzicka distance: over `trials` fresh threshold
/// vectors, accumulate how often both binarized components are set versus at
/// least one, across all dimensions, and return 1 minus the ratio. Converges
/// to the exact distance; kept as the reference the hashing forest is tested
/// against.
double estimate_ruzicka(const PreferenceVector& p, const PreferenceVector& q, std::size_t trials,
                        Rng& rng);

}  // namespace prefspace
