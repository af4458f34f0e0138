#pragma once

// Random states and directions shared by the property tests.

#include "bellopt/quantum.hpp"

#include <numbers>
#include <random>

namespace bellopt::testing {

// Ginibre ensemble: G G^dagger / Tr, full rank almost surely.
inline quantum::DensityMatrix random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  quantum::Matrix4c g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = {n(rng), n(rng)};
  quantum::Matrix4c m = g * g.adjoint();
  m /= m.trace().real();
  return quantum::DensityMatrix::from_matrix(0.5 * (m + m.adjoint()));
}

inline quantum::BlochDirection random_direction(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {std::acos(1.0 - 2.0 * u(rng)), 2.0 * std::numbers::pi * u(rng)};
}

}  // namespace bellopt::testing
