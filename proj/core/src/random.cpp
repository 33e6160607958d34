#include "prefspace/random.hpp"

#include <cassert>

#include "prefspace/errors.hpp"

namespace prefspace {

std::vector<std::uint32_t> Rng::sample_without_replacement(std::uint32_t n, std::uint32_t count) {
    if (count > n) throw InvalidArgumentError("cannot draw more distinct indices than available");
    std::vector<std::uint32_t> pool(n);
    for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
    // Partial Fisher-Yates: the first `count` slots end up uniform without replacement.
    for (std::uint32_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::uint32_t>(below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

namespace {

int bit_width_of(std::uint32_t x) {
    int bits = 0;
    while (x > 0) {
        ++bits;
        x >>= 1;
    }
    return bits;
}

}  // namespace

std::uint32_t permuted_index(std::uint64_t seed, std::uint32_t value, std::uint32_t domain) {
    assert(domain >= 1);
    assert(value < domain);
    if (domain == 1) return 0;

    const int half_bits = (bit_width_of(domain - 1) + 1) / 2;
    const std::uint32_t half_mask = (1u << half_bits) - 1u;

    std::uint32_t x = value;
    do {
        std::uint32_t left = x >> half_bits;
        std::uint32_t right = x & half_mask;
        for (std::uint64_t round = 0; round < 4; ++round) {
            const auto f = static_cast<std::uint32_t>(
                               mix64(seed ^ (round << 32) ^ right)) &
                           half_mask;
            const std::uint32_t next_right = left ^ f;
            left = right;
            right = next_right;
        }
        x = (left << half_bits) | right;
    } while (x >= domain);  // cycle-walk back into [0, domain)
    return x;
}

}  // namespace prefspace
