#pragma once

#include <cstdint>
#include <vector>

namespace prefspace {

/// SplitMix64 finalizer. Stateless; the workhorse for counter-based derivation.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive an independent stream seed from a base seed and a tag.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
    return mix64(seed ^ mix64(tag));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
    return derive_seed(derive_seed(seed, a), b);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                    std::uint64_t c) noexcept {
    return derive_seed(derive_seed(seed, a, b), c);
}

/// Map a 64-bit word to a double in [0, 1) with 53 random bits.
constexpr double to_unit_double(std::uint64_t word) noexcept {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

/// xoshiro256++ with SplitMix64 seeding. Self-contained so that identical seeds
/// give identical streams on every platform, which the reproducibility contract
/// of pool sampling, forests and the bench CLI relies on.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            sm += 0x9e3779b97f4a7c15ULL;
            word = mix64(sm);
        }
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform01() noexcept { return to_unit_double(next_u64()); }

    /// Uniform integer in [0, bound). Rejection sampling keeps it unbiased.
    std::uint64_t below(std::uint64_t bound) noexcept {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t word = next_u64();
            if (word >= threshold) return word % bound;
        }
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            using std::swap;
            swap(items[i - 1], items[static_cast<std::size_t>(below(i))]);
        }
    }

    /// Draw `count` distinct indices from [0, n), in random order.
    std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t count);

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

/// Pseudorandom bijection on [0, domain), evaluable pointwise in O(1).
/// Built as a 4-round Feistel network over the smallest even-bit cover of the
/// domain, with cycle-walking back into range. Residues of this map modulo b
/// give a balanced random partition of [0, domain) without materializing it.
std::uint32_t permuted_index(std::uint64_t seed, std::uint32_t value, std::uint32_t domain);

}  // namespace prefspace
