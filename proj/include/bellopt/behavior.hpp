#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace bellopt {

/// Coincidence counts for one setting pair, indexed by outcome pair in the
/// order (+1,+1), (+1,-1), (-1,+1), (-1,-1).
struct OutcomeCounts {
  std::array<std::uint64_t, 4> n{};

  std::uint64_t total() const noexcept { return n[0] + n[1] + n[2] + n[3]; }
  bool operator==(const OutcomeCounts&) const = default;
};

/// Observed statistics of one oracle evaluation: a k x k table of
/// correlators <A_x B_y> plus per-party marginals. Pairs the oracle skipped
/// are flagged unmeasured and read as zero.
class BehaviorTable {
 public:
  explicit BehaviorTable(int settings)
      : k_(settings),
        e_(static_cast<std::size_t>(settings * settings), 0.0),
        measured_(static_cast<std::size_t>(settings * settings), false),
        marginal_a_(static_cast<std::size_t>(settings), 0.0),
        marginal_b_(static_cast<std::size_t>(settings), 0.0),
        counts_(static_cast<std::size_t>(settings * settings)) {
    if (settings < 1) throw std::invalid_argument("settings must be >= 1");
  }

  int settings() const noexcept { return k_; }

  double correlator(int x, int y) const { return e_.at(index(x, y)); }
  bool measured(int x, int y) const { return measured_.at(index(x, y)); }
  void set_correlator(int x, int y, double e) {
    e_.at(index(x, y)) = e;
    measured_.at(index(x, y)) = true;
  }

  double marginal_a(int x) const { return marginal_a_.at(static_cast<std::size_t>(x)); }
  double marginal_b(int y) const { return marginal_b_.at(static_cast<std::size_t>(y)); }
  void set_marginal_a(int x, double v) { marginal_a_.at(static_cast<std::size_t>(x)) = v; }
  void set_marginal_b(int y, double v) { marginal_b_.at(static_cast<std::size_t>(y)) = v; }

  /// Raw counts, present only for sampled (noisy) evaluations.
  const std::optional<OutcomeCounts>& counts(int x, int y) const {
    return counts_.at(index(x, y));
  }
  void set_counts(int x, int y, const OutcomeCounts& c) { counts_.at(index(x, y)) = c; }

  bool operator==(const BehaviorTable&) const = default;

 private:
  std::size_t index(int x, int y) const {
    if (x < 0 || y < 0 || x >= k_ || y >= k_) {
      throw std::out_of_range("setting index out of range");
    }
    return static_cast<std::size_t>(x * k_ + y);
  }

  int k_;
  std::vector<double> e_;
  std::vector<bool> measured_;
  std::vector<double> marginal_a_;
  std::vector<double> marginal_b_;
  std::vector<std::optional<OutcomeCounts>> counts_;
};

}  // namespace bellopt
