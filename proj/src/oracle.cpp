#include "bellopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bellopt::oracle {

double apply_response(double knob, Response f) {
  switch (f) {
    case Response::identity:
      return knob;
    case Response::osc:
      return 5.0 * std::exp(-std::abs(knob)) * std::sin(200.0 * knob);
    case Response::logi:
      return std::numbers::pi / (std::exp(knob) + 1.0);
    case Response::sinh:
      return std::sinh(knob);
  }
  throw std::logic_error("unknown response function");
}

std::string_view to_string(Response f) {
  switch (f) {
    case Response::identity: return "identity";
    case Response::osc: return "osc";
    case Response::logi: return "logi";
    case Response::sinh: return "sinh";
  }
  return "unknown";
}

std::optional<Response> parse_response(std::string_view name) {
  for (Response f : {Response::identity, Response::osc, Response::logi, Response::sinh}) {
    if (name == to_string(f)) return f;
  }
  return std::nullopt;
}

void OracleConfig::validate() const {
  if (settings_per_party < 2) {
    throw std::invalid_argument("settings_per_party must be >= 2");
  }
  if (noise.kind != NoiseModel::Kind::exact && !(noise.events >= 1.0)) {
    throw std::invalid_argument("noise events must be >= 1");
  }
  if (!(noise.sigma >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
  for (auto [x, y] : measured_pairs) {
    if (x < 0 || y < 0 || x >= settings_per_party || y >= settings_per_party) {
      throw std::invalid_argument("measured pair index out of range");
    }
  }
  if (source && (source->p < 0.0 || source->p > 1.0 || source->lambda < 0.0 ||
                 source->lambda > 1.0)) {
    throw std::invalid_argument("source family p and lambda must lie in [0, 1]");
  }
}

std::size_t knob_count(const OracleConfig& cfg) {
  const std::size_t per_setting = cfg.theta_only ? 1 : 2;
  return 2 * per_setting * static_cast<std::size_t>(cfg.settings_per_party) +
         (cfg.source ? 1 : 0);
}

Directions knobs_to_directions(std::span<const double> knobs, const OracleConfig& cfg) {
  if (knobs.size() != knob_count(cfg)) {
    throw std::invalid_argument("knob vector has length " + std::to_string(knobs.size()) +
                                ", expected " + std::to_string(knob_count(cfg)));
  }
  const std::size_t k = static_cast<std::size_t>(cfg.settings_per_party);
  const std::size_t per_setting = cfg.theta_only ? 1 : 2;
  Directions out;
  out.alice.reserve(k);
  out.bob.reserve(k);
  for (std::size_t party = 0; party < 2; ++party) {
    auto& dirs = party == 0 ? out.alice : out.bob;
    for (std::size_t s = 0; s < k; ++s) {
      const std::size_t base = (party * k + s) * per_setting;
      const double theta = apply_response(knobs[base], cfg.response);
      const double phi = cfg.theta_only ? 0.0 : apply_response(knobs[base + 1], cfg.response);
      dirs.push_back(quantum::BlochDirection::reduced(theta, phi));
    }
  }
  return out;
}

BellOracle::BellOracle(OracleConfig cfg)
    : cfg_(std::move(cfg)), knobs_(oracle::knob_count(cfg_)), rng_(cfg_.rng_seed) {
  cfg_.validate();
}

quantum::DensityMatrix BellOracle::state_for(std::span<const double> knobs) const {
  if (!cfg_.source) return cfg_.state;
  return quantum::make_noisy_state(cfg_.source->p, cfg_.source->lambda, knobs.back());
}

std::vector<std::pair<int, int>> BellOracle::pairs() const {
  if (!cfg_.measured_pairs.empty()) return cfg_.measured_pairs;
  std::vector<std::pair<int, int>> all;
  for (int x = 0; x < cfg_.settings_per_party; ++x) {
    for (int y = 0; y < cfg_.settings_per_party; ++y) all.emplace_back(x, y);
  }
  return all;
}

BehaviorTable BellOracle::evaluate_exact(std::span<const double> knobs) const {
  const Directions dirs = knobs_to_directions(knobs, cfg_);
  const quantum::DensityMatrix rho = state_for(knobs);
  BehaviorTable table(cfg_.settings_per_party);
  for (auto [x, y] : pairs()) {
    table.set_correlator(x, y, std::clamp(quantum::correlator(rho, dirs.alice[x], dirs.bob[y]),
                                          -1.0, 1.0));
  }
  for (int s = 0; s < cfg_.settings_per_party; ++s) {
    table.set_marginal_a(s, quantum::marginal_a(rho, dirs.alice[s]));
    table.set_marginal_b(s, quantum::marginal_b(rho, dirs.bob[s]));
  }
  return table;
}

BehaviorTable BellOracle::evaluate(std::span<const double> knobs) {
  ++evaluations_;
  if (cfg_.noise.kind == NoiseModel::Kind::exact) return evaluate_exact(knobs);

  const Directions dirs = knobs_to_directions(knobs, cfg_);
  const quantum::DensityMatrix rho = state_for(knobs);
  const int k = cfg_.settings_per_party;
  BehaviorTable table(k);
  std::vector<double> a_num(k, 0.0), a_den(k, 0.0), b_num(k, 0.0), b_den(k, 0.0);

  for (auto [x, y] : pairs()) {
    const auto probs = quantum::outcome_probabilities(rho, dirs.alice[x], dirs.bob[y]);
    OutcomeCounts counts;
    for (std::size_t i = 0; i < 4; ++i) {
      const double mean = cfg_.noise.events * std::max(0.0, probs[i]);
      if (mean > 0.0) {
        std::poisson_distribution<std::uint64_t> draw(mean);
        counts.n[i] = draw(rng_);
      }
    }
    const auto& n = counts.n;
    const double total = static_cast<double>(counts.total());
    double e = 0.0;
    if (total > 0.0) {
      e = (static_cast<double>(n[0]) - static_cast<double>(n[1]) -
           static_cast<double>(n[2]) + static_cast<double>(n[3])) /
          total;
      a_num[x] += static_cast<double>(n[0]) + static_cast<double>(n[1]) -
                  static_cast<double>(n[2]) - static_cast<double>(n[3]);
      a_den[x] += total;
      b_num[y] += static_cast<double>(n[0]) - static_cast<double>(n[1]) +
                  static_cast<double>(n[2]) - static_cast<double>(n[3]);
      b_den[y] += total;
    }
    if (cfg_.noise.kind == NoiseModel::Kind::poisson_gaussian && cfg_.noise.sigma > 0.0) {
      std::normal_distribution<double> gauss(0.0, cfg_.noise.sigma);
      e += gauss(rng_);
    }
    table.set_correlator(x, y, std::clamp(e, -1.0, 1.0));
    table.set_counts(x, y, counts);
  }
  for (int s = 0; s < k; ++s) {
    table.set_marginal_a(s, a_den[s] > 0.0 ? a_num[s] / a_den[s] : 0.0);
    table.set_marginal_b(s, b_den[s] > 0.0 ? b_num[s] / b_den[s] : 0.0);
  }
  return table;
}

}  // namespace bellopt::oracle
