#pragma once

// Stochastic Nelder-Mead direct search on an opaque, possibly noisy cost.
//
// The optimizer only ever sees `CostFunction`: a knob vector in, a scalar
// cost out. It minimizes; Bell maximization passes cost = -S.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace bellopt::snm {

using Point = std::vector<double>;
using CostFunction = std::function<double(std::span<const double>)>;

/// Closed per-coordinate interval box.
class Box {
 public:
  Box(std::vector<double> lower, std::vector<double> upper);
  static Box uniform(std::size_t dim, double lower, double upper);

  std::size_t dim() const noexcept { return lower_.size(); }
  double lower(std::size_t i) const { return lower_.at(i); }
  double upper(std::size_t i) const { return upper_.at(i); }
  double width(std::size_t i) const { return upper_.at(i) - lower_.at(i); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }

  bool contains(std::span<const double> p) const;
  Point clip(Point p) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

struct SnmConfig {
  double reflection = 1.0;   // delta > 0
  double contraction = 0.5;  // eta in [0, 1]
  double expansion = 2.0;    // gamma > 1
  double ars_radius = 0.10;  // epsilon, fraction of each coordinate's width
  int ars_max_tries = 10;
  long max_iterations = 1000;
  /// Stop once this many cost evaluations were spent; 0 means unlimited.
  long max_evaluations = 0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument when a coefficient is out of range.
  void validate() const;
};

struct Vertex {
  Point knobs;
  double cost = 0.0;
};

/// Points with their recorded costs. The cost of a point is fixed when it
/// enters; it is never re-evaluated.
class Simplex {
 public:
  explicit Simplex(std::size_t capacity) : capacity_(capacity) {}

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Vertex>& points() const noexcept { return points_; }

  void add(Vertex v) { points_.push_back(std::move(v)); }
  /// Drops the worst points until size() <= capacity().
  void trim();
  /// Sorts ascending by cost (stable, so ties keep insertion order).
  void sort();
  /// Valid after sort().
  const Vertex& best() const { return points_.front(); }
  const Vertex& worst() const { return points_.back(); }
  const Vertex& second_worst() const { return points_.at(points_.size() - 2); }
  void replace_worst(Vertex v) { points_.back() = std::move(v); }
  /// Mean of every point except the worst (after sort()).
  Point barycenter_without_worst() const;

 private:
  std::size_t capacity_;
  std::vector<Vertex> points_;
};

struct TraceRecord {
  long iteration = 0;
  double best_cost = 0.0;
  long evaluations = 0;
  Point best_knobs;

  bool operator==(const TraceRecord&) const = default;
};

/// One record per completed iteration (SNM) or per evaluation (baselines).
/// `best_cost` is the running minimum of recorded costs.
struct RunTrace {
  std::vector<TraceRecord> records;
  double best_cost = 0.0;
  Point best_knobs;
  long evaluations = 0;

  bool operator==(const RunTrace&) const = default;
};

/// Latin hypercube design: every coordinate's values fall in distinct
/// equal-width strata, one per stratum, randomly paired across points.
/// Throws std::invalid_argument for a zero-width box or n_points == 0.
std::vector<Point> latin_hypercube(std::size_t n_points, const Box& box, std::mt19937_64& rng);

/// (1 + delta) bar - delta worst.
Point reflect(std::span<const double> bar, std::span<const double> worst, double delta);
/// gamma ref + (1 - gamma) bar.
Point expand(std::span<const double> ref, std::span<const double> bar, double gamma);
/// eta from + (1 - eta) bar.
Point contract(std::span<const double> from, std::span<const double> bar, double eta);

struct ArsResult {
  Vertex vertex;
  bool improved = false;  // cost below the current worst
  int evaluations = 0;
};

/// Adaptive random search around the best point of a sorted simplex: up to
/// `tries` uniform draws in [best - eps w, best + eps w] clipped to the box,
/// returning the first that beats the worst recorded cost, else the best of
/// the draws. `tries` must be >= 1.
ArsResult ars_step(const Simplex& simplex, const Box& box, double epsilon, int tries,
                   std::mt19937_64& rng, const CostFunction& cost);

/// Iteration-level driver, exposed so tests can observe the simplex.
class StochasticNelderMead {
 public:
  StochasticNelderMead(CostFunction cost, Box box, SnmConfig cfg);

  /// Runs one reflect/expand/contract/ARS cycle. Returns false, changing
  /// nothing, when the evaluation budget is already spent.
  bool iterate();

  const Simplex& simplex() const noexcept { return simplex_; }
  long iteration() const noexcept { return iteration_; }
  long evaluations() const noexcept { return evaluations_; }
  const RunTrace& trace() const noexcept { return trace_; }
  RunTrace take_trace() { return std::move(trace_); }

 private:
  long remaining() const;
  double evaluate(const Point& p);
  void record();

  CostFunction cost_;
  Box box_;
  SnmConfig cfg_;
  std::mt19937_64 rng_;
  Simplex simplex_;
  long iteration_ = 0;
  long evaluations_ = 0;
  RunTrace trace_;
};

/// Latin hypercube start with dim + 1 points, then iterate until
/// max_iterations or the evaluation budget.
RunTrace minimize(const CostFunction& cost, const Box& box, const SnmConfig& cfg);

}  // namespace bellopt::snm
