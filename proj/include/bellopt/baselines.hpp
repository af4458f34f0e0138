#pragma once

// Non-adaptive reference searches, traced one record per evaluation.

#include "bellopt/snm.hpp"

#include <cstdint>

namespace bellopt::snm {

/// Evaluates every point of an equally spaced grid with samples_per_dim
/// points per coordinate, spacing width / samples_per_dim, origin drawn
/// uniformly inside the first cell. Throws std::invalid_argument when
/// samples_per_dim < 2 or the grid exceeds max_evaluations.
RunTrace grid_search(const CostFunction& cost, const Box& box, int samples_per_dim,
                     std::uint64_t seed, long max_evaluations = 10'000'000);

/// `budget` independent uniform draws over the box.
RunTrace random_search(const CostFunction& cost, const Box& box, long budget,
                       std::uint64_t seed);

}  // namespace bellopt::snm
