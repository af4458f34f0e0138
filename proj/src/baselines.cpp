#include "bellopt/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bellopt::snm {

namespace {

void push_record(RunTrace& trace, const Point& p, double c) {
  ++trace.evaluations;
  if (trace.records.empty() || c < trace.best_cost) {
    trace.best_cost = c;
    trace.best_knobs = p;
  }
  trace.records.push_back({trace.evaluations, trace.best_cost, trace.evaluations,
                           trace.best_knobs});
}

}  // namespace

RunTrace grid_search(const CostFunction& cost, const Box& box, int samples_per_dim,
                     std::uint64_t seed, long max_evaluations) {
  if (samples_per_dim < 2) throw std::invalid_argument("grid search needs >= 2 samples per dim");
  const std::size_t dim = box.dim();
  double total = std::pow(static_cast<double>(samples_per_dim), static_cast<double>(dim));
  if (total > static_cast<double>(max_evaluations)) {
    throw std::invalid_argument("grid of " + std::to_string(samples_per_dim) + "^" +
                                std::to_string(dim) + " points exceeds the budget of " +
                                std::to_string(max_evaluations));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> origin(dim), spacing(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    spacing[d] = box.width(d) / samples_per_dim;
    origin[d] = box.lower(d) + unit(rng) * spacing[d];
  }

  RunTrace trace;
  std::vector<int> idx(dim, 0);
  const long count = static_cast<long>(total);
  trace.records.reserve(static_cast<std::size_t>(count));
  Point p(dim);
  for (long n = 0; n < count; ++n) {
    for (std::size_t d = 0; d < dim; ++d) p[d] = origin[d] + idx[d] * spacing[d];
    p = box.clip(std::move(p));
    push_record(trace, p, cost(p));
    // odometer increment, last coordinate fastest
    for (std::size_t d = dim; d-- > 0;) {
      if (++idx[d] < samples_per_dim) break;
      idx[d] = 0;
    }
  }
  return trace;
}

RunTrace random_search(const CostFunction& cost, const Box& box, long budget,
                       std::uint64_t seed) {
  if (budget < 0) throw std::invalid_argument("random search budget must be >= 0");
  std::mt19937_64 rng(seed);
  RunTrace trace;
  trace.records.reserve(static_cast<std::size_t>(budget));
  Point p(box.dim());
  for (long n = 0; n < budget; ++n) {
    for (std::size_t d = 0; d < box.dim(); ++d) {
      std::uniform_real_distribution<double> u(box.lower(d), box.upper(d));
      p[d] = u(rng);
    }
    push_record(trace, p, cost(p));
  }
  return trace;
}

}  // namespace bellopt::snm
