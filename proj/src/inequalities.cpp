#include "bellopt/inequalities.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bellopt::bell {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_size(const BehaviorTable& e, int k, const char* what) {
  if (e.settings() != k) {
    throw std::invalid_argument(std::string(what) + " needs a " + std::to_string(k) + "x" +
                                std::to_string(k) + " table, got " +
                                std::to_string(e.settings()));
  }
}

void require_tilted(double alpha, double beta) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("tilted inequality needs alpha >= 1");
  if (!(beta >= 0.0)) throw std::invalid_argument("tilted inequality needs beta >= 0");
}

}  // namespace

void validate(const Inequality& ineq) {
  std::visit(overloaded{
                 [](const Chsh&) {},
                 [](const Chained& c) {
                   if (c.k < 2) throw std::invalid_argument("chained inequality needs k >= 2");
                 },
                 [](const Tilted& t) { require_tilted(t.alpha, t.beta); },
                 [](const Tlm&) {},
             },
             ineq);
}

int settings_per_party(const Inequality& ineq) {
  if (const auto* c = std::get_if<Chained>(&ineq)) return c->k;
  return 2;
}

std::string name(const Inequality& ineq) {
  return std::visit(overloaded{
                        [](const Chsh&) -> std::string { return "chsh"; },
                        [](const Chained&) -> std::string { return "chained"; },
                        [](const Tilted&) -> std::string { return "tilted"; },
                        [](const Tlm&) -> std::string { return "tlm"; },
                    },
                    ineq);
}

std::vector<std::pair<int, int>> required_pairs(const Inequality& ineq) {
  if (const auto* c = std::get_if<Chained>(&ineq)) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 1; i <= c->k; ++i) {
      pairs.emplace_back(i - 1, i - 1);
      pairs.emplace_back(i % c->k, i - 1);
    }
    return pairs;
  }
  return {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
}

double chsh_value(const BehaviorTable& e) {
  require_size(e, 2, "CHSH");
  return e.correlator(0, 0) + e.correlator(0, 1) + e.correlator(1, 0) - e.correlator(1, 1);
}

double chained_value(const BehaviorTable& e, int k) {
  if (k < 2) throw std::invalid_argument("chained inequality needs k >= 2");
  require_size(e, k, "chained inequality");
  double s = 0.0;
  for (int i = 1; i <= k; ++i) {
    const double same = e.correlator(i - 1, i - 1);
    const double next = i == k ? -e.correlator(0, k - 1) : e.correlator(i, i - 1);
    s += std::abs(0.5 * (same + next));
  }
  return s;
}

double tilted_value(const BehaviorTable& e, double marginal_a0, double alpha, double beta) {
  require_size(e, 2, "tilted inequality");
  require_tilted(alpha, beta);
  return beta * marginal_a0 + alpha * e.correlator(0, 0) + alpha * e.correlator(0, 1) +
         e.correlator(1, 0) - e.correlator(1, 1);
}

double tilted_value(const BehaviorTable& e, double alpha, double beta) {
  return tilted_value(e, e.marginal_a(0), alpha, beta);
}

double tlm_value(const BehaviorTable& e) {
  require_size(e, 2, "TLM inequality");
  return -std::asin(e.correlator(0, 0)) + std::asin(e.correlator(0, 1)) +
         std::asin(e.correlator(1, 0)) + std::asin(e.correlator(1, 1));
}

double value(const Inequality& ineq, const BehaviorTable& e) {
  return std::visit(overloaded{
                        [&](const Chsh&) { return chsh_value(e); },
                        [&](const Chained& c) { return chained_value(e, c.k); },
                        [&](const Tilted& t) { return tilted_value(e, t.alpha, t.beta); },
                        [&](const Tlm&) { return tlm_value(e); },
                    },
                    ineq);
}

double classical_bound(const Inequality& ineq) {
  validate(ineq);
  return std::visit(overloaded{
                        [](const Chsh&) { return 2.0; },
                        [](const Chained& c) { return static_cast<double>(c.k - 1); },
                        [](const Tilted& t) { return 2.0 * t.alpha + t.beta; },
                        [](const Tlm&) -> double {
                          throw std::domain_error(
                              "TLM is a quantum inequality: no local bound distinct from its "
                              "quantum bound");
                        },
                    },
                    ineq);
}

double quantum_max(const Inequality& ineq) {
  validate(ineq);
  return std::visit(
      overloaded{
          [](const Chsh&) { return 2.0 * std::numbers::sqrt2; },
          [](const Chained& c) {
            return c.k * std::cos(std::numbers::pi / (2.0 * c.k));
          },
          [](const Tilted& t) {
            return 2.0 * std::sqrt((1.0 + t.alpha * t.alpha) * (1.0 + t.beta * t.beta / 4.0));
          },
          [](const Tlm&) { return std::numbers::pi; },
      },
      ineq);
}

double quantum_max(const Inequality& ineq, const quantum::DensityMatrix& rho,
                   const NumericMaxOptions& opts) {
  validate(ineq);
  if (std::holds_alternative<Chsh>(ineq)) return quantum::horodecki_chsh_max(rho);
  return numeric_quantum_max(ineq, rho, opts).value;
}

BehaviorTable exact_table(const quantum::DensityMatrix& rho,
                          const std::vector<quantum::BlochDirection>& alice,
                          const std::vector<quantum::BlochDirection>& bob) {
  if (alice.size() != bob.size() || alice.empty()) {
    throw std::invalid_argument("need the same nonzero number of settings per party");
  }
  const int k = static_cast<int>(alice.size());
  BehaviorTable t(k);
  for (int x = 0; x < k; ++x) {
    for (int y = 0; y < k; ++y) {
      t.set_correlator(x, y, quantum::correlator(rho, alice[x], bob[y]));
    }
    t.set_marginal_a(x, quantum::marginal_a(rho, alice[x]));
    t.set_marginal_b(x, quantum::marginal_b(rho, bob[x]));
  }
  return t;
}

}  // namespace bellopt::bell
