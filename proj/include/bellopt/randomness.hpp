#pragma once

// Device-independent randomness from CHSH statistics.

#include "bellopt/oracle.hpp"
#include "bellopt/snm.hpp"

#include <functional>
#include <vector>

namespace bellopt::randomness {

struct GuessingBound {
  double p_guess = 1.0;
  double min_entropy_bits = 0.0;  // -log2 p_guess
};

/// Maps an observed CHSH value to a bound on the adversary's guessing
/// probability.
using GuessingMap = std::function<double(double chsh)>;

/// 1/2 + 1/2 sqrt(2 - S^2/4) for S in (2, 2 sqrt 2]; 1 for S <= 2.
/// Throws std::domain_error for S > 2 sqrt 2 + 1e-9.
GuessingBound p_guess_from_chsh(double chsh);

/// Same bound with S first clamped to 2 sqrt 2; suitable as a cost on noisy
/// data, where sampled S can overshoot the quantum bound.
double clamped_chsh_guessing(double chsh);

struct RandomnessRun {
  snm::RunTrace trace;              // costs are p_guess values
  std::vector<double> best_p_guess;  // per iteration
};

/// SNM with cost = map(chsh_value(E)) on a two-setting oracle. For S <= 2
/// the cost continues as map(2) + (2 - S) so the search can leave the
/// no-violation plateau; recorded values never exceed map(2).
RandomnessRun optimize_randomness(oracle::BellOracle& oracle, const snm::Box& box,
                                  const snm::SnmConfig& cfg,
                                  const GuessingMap& map = clamped_chsh_guessing);

}  // namespace bellopt::randomness
