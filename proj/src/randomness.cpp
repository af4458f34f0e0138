#include "bellopt/randomness.hpp"

#include "bellopt/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bellopt::randomness {

namespace {
constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;
}

GuessingBound p_guess_from_chsh(double chsh) {
  if (!std::isfinite(chsh) || chsh > kTsirelson + 1e-9) {
    throw std::domain_error("CHSH value " + std::to_string(chsh) +
                            " exceeds the quantum bound 2 sqrt 2");
  }
  double p = 1.0;
  if (chsh > 2.0) {
    const double s = std::min(chsh, kTsirelson);
    p = 0.5 + 0.5 * std::sqrt(std::max(0.0, 2.0 - s * s / 4.0));
  }
  return {p, -std::log2(p)};
}

double clamped_chsh_guessing(double chsh) {
  return p_guess_from_chsh(std::min(chsh, kTsirelson)).p_guess;
}

RandomnessRun optimize_randomness(oracle::BellOracle& oracle, const snm::Box& box,
                                  const snm::SnmConfig& cfg, const GuessingMap& map) {
  if (oracle.config().settings_per_party != 2) {
    throw std::invalid_argument("randomness optimization needs a two-setting oracle");
  }
  // No violation certifies nothing, so the map is flat for S <= 2 and a
  // random start would sit on that plateau forever. Below the local bound
  // the optimizer sees map(2) + (2 - S) instead; reported values are the
  // map's own, cut back to map(2).
  const double at_local = map(2.0);
  const snm::CostFunction cost = [&](std::span<const double> t) {
    const double s = bell::chsh_value(oracle.evaluate(t));
    return s > 2.0 ? map(s) : at_local + (2.0 - s);
  };
  RandomnessRun run;
  run.trace = snm::minimize(cost, box, cfg);
  const auto reported = [&](double c) { return c > at_local ? at_local : c; };
  run.trace.best_cost = reported(run.trace.best_cost);
  run.best_p_guess.reserve(run.trace.records.size());
  for (auto& r : run.trace.records) {
    r.best_cost = reported(r.best_cost);
    run.best_p_guess.push_back(r.best_cost);
  }
  return run;
}

}  // namespace bellopt::randomness
