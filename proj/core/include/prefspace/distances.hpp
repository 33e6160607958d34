#pragma once

#include <cstdint>

#include "prefspace/embedding.hpp"

namespace prefspace {

enum class DistanceKind : std::uint8_t { kRuzicka, kTanimoto, kJaccard };

const char* distance_name(DistanceKind kind);

/// 1 - sum(min(p_i, q_i)) / sum(max(p_i, q_i)). Two all-zero vectors are at
/// distance 0; an all-zero vector is at distance 1 from any nonzero vector.
double ruzicka(const PreferenceVector& p, const PreferenceVector& q);

/// 1 - <p,q> / (|p|^2 + |q|^2 - <p,q>), same zero-vector conventions.
double tanimoto(const PreferenceVector& p, const PreferenceVector& q);

/// 1 - |support(p) & support(q)| / |support(p) | support(q)|. Meant for binary
/// vectors; nonzero components count as set.
double jaccard(const PreferenceVector& p, const PreferenceVector& q);

double distance(DistanceKind kind, const PreferenceVector& p, const PreferenceVector& q);

}  // namespace prefspace
