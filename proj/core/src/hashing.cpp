#include "prefspace/hashing.hpp"

#include <algorithm>
#include <numeric>

#include "prefspace/errors.hpp"

namespace prefspace {

namespace {

constexpr std::uint64_t kTauTag = 0x7a75u;
constexpr std::uint64_t kRankTag = 0x6d68u;
constexpr std::uint64_t kGroupTag = 0x6772u;
constexpr std::uint64_t kEmptyTag = 0x656du;

}  // namespace

bool BinaryVector::test(std::uint32_t index) const {
    return std::binary_search(ones.begin(), ones.end(), index);
}

DimensionPermutation::DimensionPermutation(std::vector<std::uint32_t> order)
    : order_(std::move(order)) {
    rank_.assign(order_.size(), 0);
    std::vector<bool> seen(order_.size(), false);
    for (std::uint32_t pos = 0; pos < order_.size(); ++pos) {
        const std::uint32_t dimension = order_[pos];
        if (dimension >= order_.size() || seen[dimension]) {
            throw InvalidArgumentError("dimension order is not a permutation");
        }
        seen[dimension] = true;
        rank_[dimension] = pos;
    }
}

DimensionPermutation DimensionPermutation::sampled(std::uint32_t dim, Rng& rng) {
    std::vector<std::uint32_t> order(dim);
    std::iota(order.begin(), order.end(), 0u);
    rng.shuffle(order);
    return DimensionPermutation(std::move(order));
}

ThresholdVector sample_thresholds(std::uint32_t dim, Rng& rng) {
    if (dim == 0) throw InvalidArgumentError("threshold vector needs at least one dimension");
    ThresholdVector out;
    out.tau.reserve(dim);
    for (std::uint32_t i = 0; i < dim; ++i) out.tau.push_back(rng.uniform01());
    return out;
}

BinaryVector binarize(const PreferenceVector& p, const ThresholdVector& tau) {
    if (p.dim() != tau.dim()) throw InvalidArgumentError("threshold dimension mismatch");
    BinaryVector bits;
    bits.dim = p.dim();
    for (std::size_t k = 0; k < p.indices().size(); ++k) {
        if (p.values()[k] > tau.tau[p.indices()[k]]) bits.ones.push_back(p.indices()[k]);
    }
    return bits;
}

std::optional<std::uint32_t> minhash_bucket(const BinaryVector& bits,
                                            const DimensionPermutation& perm) {
    if (bits.dim != perm.dim()) throw InvalidArgumentError("permutation dimension mismatch");
    if (bits.ones.empty()) return std::nullopt;
    std::uint32_t best = bits.ones.front();
    std::uint32_t best_rank = perm.rank(best);
    for (const std::uint32_t dimension : bits.ones) {
        const std::uint32_t r = perm.rank(dimension);
        if (r < best_rank) {
            best_rank = r;
            best = dimension;
        }
    }
    return best;
}

SplitRule::SplitRule(std::uint64_t seed, std::uint32_t dim, std::uint32_t branches)
    : seed_(seed),
      tau_stream_(derive_seed(seed, kTauTag)),
      rank_stream_(derive_seed(seed, kRankTag)),
      group_stream_(derive_seed(seed, kGroupTag)),
      dim_(dim),
      branches_(branches) {
    if (dim == 0) throw InvalidArgumentError("split rule needs at least one dimension");
    if (branches < 1 || branches > dim) {
        throw InvalidArgumentError("branching factor must lie in [1, dim]");
    }
}

double SplitRule::threshold(std::uint32_t dimension) const {
    return to_unit_double(mix64(tau_stream_ ^ dimension));
}

std::uint64_t SplitRule::rank_word(std::uint32_t dimension) const {
    return mix64(rank_stream_ ^ dimension);
}

std::uint32_t SplitRule::group_of(std::uint32_t bucket) const {
    if (branches_ == 1) return 0;
    return permuted_index(group_stream_, bucket, dim_) % branches_;
}

std::uint32_t SplitRule::empty_group() const {
    return static_cast<std::uint32_t>(derive_seed(seed_, kEmptyTag) % branches_);
}

std::optional<std::uint32_t> SplitRule::bucket_of(const PreferenceVector& p) const {
    if (p.dim() != dim_) throw InvalidArgumentError("split rule dimension mismatch");
    bool found = false;
    std::uint32_t best = 0;
    std::uint64_t best_word = 0;
    for (std::size_t k = 0; k < p.indices().size(); ++k) {
        const std::uint32_t dimension = p.indices()[k];
        if (p.values()[k] <= threshold(dimension)) continue;
        const std::uint64_t word = rank_word(dimension);
        // Indices are scanned in increasing order, so a strict comparison
        // tie-breaks toward the lower dimension, matching the materialized
        // permutation's argsort by (word, index).
        if (!found || word < best_word) {
            found = true;
            best = dimension;
            best_word = word;
        }
    }
    if (!found) return std::nullopt;
    return best;
}

std::uint32_t SplitRule::route(const PreferenceVector& p) const {
    const auto bucket = bucket_of(p);
    if (!bucket) return empty_group();
    return group_of(*bucket);
}

ThresholdVector SplitRule::thresholds() const {
    ThresholdVector out;
    out.tau.reserve(dim_);
    for (std::uint32_t d = 0; d < dim_; ++d) out.tau.push_back(threshold(d));
    return out;
}

DimensionPermutation SplitRule::permutation() const {
    std::vector<std::uint32_t> order(dim_);
    std::iota(order.begin(), order.end(), 0u);
    std::vector<std::uint64_t> words(dim_);
    for (std::uint32_t d = 0; d < dim_; ++d) words[d] = rank_word(d);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return words[a] != words[b] ? words[a] < words[b] : a < b;
    });
    return DimensionPermutation(std::move(order));
}

std::vector<std::uint32_t> SplitRule::group_map() const {
    std::vector<std::uint32_t> map(dim_);
    for (std::uint32_t d = 0; d < dim_; ++d) map[d] = group_of(d);
    return map;
}

SplitRule make_split_rule(std::uint32_t dim, std::uint32_t branches, Rng& rng) {
    return SplitRule(rng.next_u64(), dim, branches);
}

std::vector<std::vector<std::size_t>> apply_split(std::span<const PreferenceVector> points,
                                                  const SplitRule& rule) {
    std::vector<std::vector<std::size_t>> groups(rule.branches());
    for (std::size_t i = 0; i < points.size(); ++i) {
        groups[rule.route(points[i])].push_back(i);
    }
    return groups;
}

double estimate_ruzicka(const PreferenceVector& p, const PreferenceVector& q, std::size_t trials,
                        Rng& rng) {
    if (p.dim() != q.dim()) throw InvalidArgumentError("preference vectors have different dimensions");
    if (trials == 0) throw InvalidArgumentError("estimator needs at least one trial");

    // Only dimensions in either support can set a bit; walk the merged supports.
    const auto& pi = p.indices();
    const auto& qi = q.indices();
    std::uint64_t both = 0;
    std::uint64_t either = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::size_t a = 0;
        std::size_t b = 0;
        while (a < pi.size() || b < qi.size()) {
            double pv = 0.0;
            double qv = 0.0;
            if (b >= qi.size() || (a < pi.size() && pi[a] < qi[b])) {
                pv = p.values()[a++];
            } else if (a >= pi.size() || qi[b] < pi[a]) {
                qv = q.values()[b++];
            } else {
                pv = p.values()[a++];
                qv = q.values()[b++];
            }
            const double tau = rng.uniform01();
            const bool pb = pv > tau;
            const bool qb = qv > tau;
            both += pb && qb;
            either += pb || qb;
        }
    }
    if (either == 0) return 0.0;
    return 1.0 - static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace prefspace
