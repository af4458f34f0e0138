#pragma once

// The simulated Bell experiment as seen from outside: a knob vector goes in,
// a table of observed correlators comes out. Knobs pass through a response
// function the optimizer never sees before they become measurement angles.

#include "bellopt/behavior.hpp"
#include "bellopt/quantum.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bellopt::oracle {

enum class Response { identity, osc, logi, sinh };

/// Identity: t; Osc: 5 e^{-|t|} sin(200 t); Logi: pi / (e^t + 1);
/// Sinh: sinh(t).
double apply_response(double knob, Response f);

std::string_view to_string(Response f);
std::optional<Response> parse_response(std::string_view name);

struct NoiseModel {
  enum class Kind { exact, poisson, poisson_gaussian };

  Kind kind = Kind::exact;
  double events = 0.0;  // mean events per setting pair
  double sigma = 0.0;   // additive Gaussian std-dev per correlator

  static NoiseModel exact() { return {}; }
  static NoiseModel poisson(double n) { return {Kind::poisson, n, 0.0}; }
  static NoiseModel poisson_gaussian(double n, double s) {
    return {Kind::poisson_gaussian, n, s};
  }
};

/// Optional source knob: when present the last knob sets gamma of the
/// family make_noisy_state(p, lambda, gamma) and the fixed state is unused.
struct SourceFamily {
  double p = 1.0;
  double lambda = 0.0;
};

struct OracleConfig {
  quantum::DensityMatrix state = quantum::make_pure_state(0.0);
  int settings_per_party = 2;
  Response response = Response::identity;
  /// One knob per setting (theta); phi held at zero.
  bool theta_only = false;
  NoiseModel noise;
  std::uint64_t rng_seed = 0;
  /// Setting pairs to measure; empty means all k*k pairs.
  std::vector<std::pair<int, int>> measured_pairs;
  std::optional<SourceFamily> source;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct Directions {
  std::vector<quantum::BlochDirection> alice;
  std::vector<quantum::BlochDirection> bob;
};

/// Knob layout: Alice's settings first, then Bob's; per setting (theta, phi)
/// or theta alone in theta-only mode; the source knob, if any, last.
std::size_t knob_count(const OracleConfig& cfg);

/// Throws std::invalid_argument on a length mismatch.
Directions knobs_to_directions(std::span<const double> knobs, const OracleConfig& cfg);

/// Owns its random stream; a single instance must not be shared across
/// threads.
class BellOracle {
 public:
  explicit BellOracle(OracleConfig cfg);

  /// Sample according to the configured noise model. Advances the RNG.
  BehaviorTable evaluate(std::span<const double> knobs);
  /// Noise-free statistics, whatever the configured noise model.
  BehaviorTable evaluate_exact(std::span<const double> knobs) const;

  const OracleConfig& config() const noexcept { return cfg_; }
  std::size_t knob_count() const noexcept { return knobs_; }
  std::uint64_t evaluations() const noexcept { return evaluations_; }

 private:
  quantum::DensityMatrix state_for(std::span<const double> knobs) const;
  std::vector<std::pair<int, int>> pairs() const;

  OracleConfig cfg_;
  std::size_t knobs_;
  std::mt19937_64 rng_;
  std::uint64_t evaluations_ = 0;
};

}  // namespace bellopt::oracle
