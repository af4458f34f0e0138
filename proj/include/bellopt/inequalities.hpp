#pragma once

// Bell functionals on observed correlators, their local bounds and known
// quantum maxima. Settings are 0-based throughout.

#include "bellopt/behavior.hpp"
#include "bellopt/quantum.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bellopt::bell {

struct Chsh {};
struct Chained {
  int k = 2;
};
/// beta <A_0> + alpha <A_0 B_0> + alpha <A_0 B_1> + <A_1 B_0> - <A_1 B_1>.
struct Tilted {
  double alpha = 1.0;
  double beta = 0.0;
};
/// -asin E00 + asin E01 + asin E10 + asin E11, bounded by pi in quantum
/// theory.
struct Tlm {};

using Inequality = std::variant<Chsh, Chained, Tilted, Tlm>;

/// Throws std::invalid_argument for k < 2, alpha < 1 or beta < 0.
void validate(const Inequality& ineq);
int settings_per_party(const Inequality& ineq);
std::string name(const Inequality& ineq);
/// Setting pairs the functional reads.
std::vector<std::pair<int, int>> required_pairs(const Inequality& ineq);

double chsh_value(const BehaviorTable& e);
/// sum_i |I_i| with I_i = (<A^{i-1} B^{i-1}> + <A^i B^{i-1}>)/2, A^k = -A^0.
double chained_value(const BehaviorTable& e, int k);
double tilted_value(const BehaviorTable& e, double marginal_a0, double alpha, double beta);
/// Uses the table's own <A_0> marginal.
double tilted_value(const BehaviorTable& e, double alpha, double beta);
double tlm_value(const BehaviorTable& e);

double value(const Inequality& ineq, const BehaviorTable& e);

/// Local bound. TLM is a quantum inequality with no distinct local bound;
/// asking for one throws std::domain_error.
double classical_bound(const Inequality& ineq);

/// Maximum over all two-qubit states and measurements.
double quantum_max(const Inequality& ineq);

struct NumericMaxOptions {
  int restarts = 20;
  std::uint64_t seed = 12345;
};

struct NumericMax {
  double value = 0.0;
  std::vector<quantum::BlochDirection> alice;
  std::vector<quantum::BlochDirection> bob;
};

/// Maximum for a fixed state, over projective measurements. CHSH uses the
/// Horodecki formula; the others run a multi-start numerical search on exact
/// correlators.
double quantum_max(const Inequality& ineq, const quantum::DensityMatrix& rho,
                   const NumericMaxOptions& opts = {});

/// Multi-start numerical maximization regardless of inequality type. Linear
/// functionals use alternating (see-saw) updates of the measurement
/// vectors; TLM uses a Nelder-Mead refiner over the angles.
NumericMax numeric_quantum_max(const Inequality& ineq, const quantum::DensityMatrix& rho,
                               const NumericMaxOptions& opts = {});

/// Exact table for explicit directions.
BehaviorTable exact_table(const quantum::DensityMatrix& rho,
                          const std::vector<quantum::BlochDirection>& alice,
                          const std::vector<quantum::BlochDirection>& bob);

}  // namespace bellopt::bell
