#include "bellopt/snm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bellopt::snm {

Box::Box(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw std::invalid_argument("box bounds have different lengths");
  }
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || lower_[i] > upper_[i]) {
      throw std::invalid_argument("box coordinate " + std::to_string(i) +
                                  " is not a finite interval");
    }
  }
}

Box Box::uniform(std::size_t dim, double lower, double upper) {
  return Box(std::vector<double>(dim, lower), std::vector<double>(dim, upper));
}

bool Box::contains(std::span<const double> p) const {
  if (p.size() != dim()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= lower_[i] && p[i] <= upper_[i])) return false;
  }
  return true;
}

Point Box::clip(Point p) const {
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::clamp(p[i], lower_[i], upper_[i]);
  return p;
}

void SnmConfig::validate() const {
  if (!(reflection > 0.0)) throw std::invalid_argument("reflection coefficient must be > 0");
  if (!(expansion > 1.0)) throw std::invalid_argument("expansion coefficient must be > 1");
  if (!(contraction >= 0.0 && contraction <= 1.0)) {
    throw std::invalid_argument("contraction coefficient must lie in [0, 1]");
  }
  if (!(ars_radius > 0.0)) throw std::invalid_argument("ARS radius must be > 0");
  if (ars_max_tries < 1) throw std::invalid_argument("ARS tries must be >= 1");
  if (max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
  if (max_evaluations < 0) throw std::invalid_argument("max_evaluations must be >= 0");
}

void Simplex::sort() {
  std::stable_sort(points_.begin(), points_.end(),
                   [](const Vertex& a, const Vertex& b) { return a.cost < b.cost; });
}

void Simplex::trim() {
  // Newest first, so among equal costs the oldest point is dropped and the
  // simplex keeps moving across plateaus.
  std::reverse(points_.begin(), points_.end());
  sort();
  while (points_.size() > capacity_) points_.pop_back();
}

Point Simplex::barycenter_without_worst() const {
  if (points_.size() < 2) throw std::logic_error("barycenter needs at least two points");
  Point bar(points_.front().knobs.size(), 0.0);
  const double n = static_cast<double>(points_.size() - 1);
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    for (std::size_t d = 0; d < bar.size(); ++d) bar[d] += points_[i].knobs[d];
  }
  for (double& v : bar) v /= n;
  return bar;
}

std::vector<Point> latin_hypercube(std::size_t n_points, const Box& box, std::mt19937_64& rng) {
  if (n_points == 0) throw std::invalid_argument("latin hypercube needs at least one point");
  for (std::size_t d = 0; d < box.dim(); ++d) {
    if (!(box.width(d) > 0.0)) {
      throw std::invalid_argument("latin hypercube on a degenerate box (coordinate " +
                                  std::to_string(d) + " has zero width)");
    }
  }
  std::vector<Point> pts(n_points, Point(box.dim()));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> strata(n_points);
  for (std::size_t d = 0; d < box.dim(); ++d) {
    std::iota(strata.begin(), strata.end(), std::size_t{0});
    std::shuffle(strata.begin(), strata.end(), rng);
    const double cell = box.width(d) / static_cast<double>(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
      const double v = box.lower(d) + (static_cast<double>(strata[i]) + unit(rng)) * cell;
      pts[i][d] = std::min(v, box.upper(d));
    }
  }
  return pts;
}

Point reflect(std::span<const double> bar, std::span<const double> worst, double delta) {
  Point p(bar.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = (1.0 + delta) * bar[i] - delta * worst[i];
  return p;
}

Point expand(std::span<const double> ref, std::span<const double> bar, double gamma) {
  Point p(ref.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = gamma * ref[i] + (1.0 - gamma) * bar[i];
  return p;
}

Point contract(std::span<const double> from, std::span<const double> bar, double eta) {
  Point p(from.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = eta * from[i] + (1.0 - eta) * bar[i];
  return p;
}

ArsResult ars_step(const Simplex& simplex, const Box& box, double epsilon, int tries,
                   std::mt19937_64& rng, const CostFunction& cost) {
  if (tries < 1) throw std::invalid_argument("ARS needs at least one try");
  const Point& centre = simplex.best().knobs;
  const double worst = simplex.worst().cost;
  ArsResult out;
  out.vertex.cost = std::numeric_limits<double>::infinity();
  for (int t = 0; t < tries; ++t) {
    Point p(centre.size());
    for (std::size_t d = 0; d < p.size(); ++d) {
      const double r = epsilon * box.width(d);
      std::uniform_real_distribution<double> u(centre[d] - r, centre[d] + r);
      p[d] = u(rng);
    }
    p = box.clip(std::move(p));
    const double c = cost(p);
    ++out.evaluations;
    if (c < worst) {
      out.vertex = {std::move(p), c};
      out.improved = true;
      return out;
    }
    if (c < out.vertex.cost || out.vertex.knobs.empty()) out.vertex = {std::move(p), c};
  }
  return out;
}

StochasticNelderMead::StochasticNelderMead(CostFunction cost, Box box, SnmConfig cfg)
    : cost_(std::move(cost)),
      box_(std::move(box)),
      cfg_(cfg),
      rng_(cfg.seed),
      simplex_(box_.dim() + 1) {
  cfg_.validate();
  if (box_.dim() == 0) throw std::invalid_argument("cannot optimize over an empty box");
  for (Point& p : latin_hypercube(box_.dim() + 1, box_, rng_)) {
    if (remaining() == 0) break;
    const double c = evaluate(p);
    simplex_.add({std::move(p), c});
  }
  simplex_.trim();
}

long StochasticNelderMead::remaining() const {
  if (cfg_.max_evaluations == 0) return std::numeric_limits<long>::max();
  return std::max(0L, cfg_.max_evaluations - evaluations_);
}

double StochasticNelderMead::evaluate(const Point& p) {
  ++evaluations_;
  return cost_(p);
}

bool StochasticNelderMead::iterate() {
  if (remaining() == 0 || simplex_.size() < 2) return false;

  simplex_.sort();
  const Point bar = simplex_.barycenter_without_worst();
  const double best = simplex_.best().cost;
  const double second = simplex_.second_worst().cost;
  const Vertex worst = simplex_.worst();

  Point ref = box_.clip(reflect(bar, worst.knobs, cfg_.reflection));
  const double c_ref = evaluate(ref);

  if (c_ref >= best && c_ref < second) {
    simplex_.add({std::move(ref), c_ref});
  } else if (c_ref < best) {
    if (remaining() > 0) {
      Point exp = box_.clip(expand(ref, bar, cfg_.expansion));
      const double c_exp = evaluate(exp);
      if (c_exp < c_ref) {
        simplex_.add({std::move(exp), c_exp});
      } else {
        simplex_.add({std::move(ref), c_ref});
      }
    } else {
      simplex_.add({std::move(ref), c_ref});
    }
  } else if (remaining() > 0) {
    const bool external = c_ref < worst.cost;
    Point cont = box_.clip(contract(external ? std::span<const double>(ref)
                                             : std::span<const double>(worst.knobs),
                                    bar, cfg_.contraction));
    const double c_cont = evaluate(cont);
    const bool accepted = external ? c_cont <= c_ref : c_cont <= worst.cost;
    if (accepted) {
      simplex_.add({std::move(cont), c_cont});
    } else if (remaining() > 0) {
      const int tries =
          static_cast<int>(std::min<long>(cfg_.ars_max_tries, remaining()));
      ArsResult ars = ars_step(simplex_, box_, cfg_.ars_radius, tries, rng_, cost_);
      evaluations_ += ars.evaluations;
      if (ars.improved) {
        simplex_.add(std::move(ars.vertex));
      } else {
        simplex_.replace_worst(std::move(ars.vertex));
      }
    }
  }

  simplex_.trim();
  ++iteration_;
  record();
  return true;
}

void StochasticNelderMead::record() {
  const Vertex& best = simplex_.best();
  TraceRecord r{iteration_, best.cost, evaluations_, best.knobs};
  if (!trace_.records.empty() && trace_.records.back().best_cost <= best.cost) {
    r.best_cost = trace_.records.back().best_cost;
    r.best_knobs = trace_.records.back().best_knobs;
  }
  trace_.best_cost = r.best_cost;
  trace_.best_knobs = r.best_knobs;
  trace_.evaluations = evaluations_;
  trace_.records.push_back(std::move(r));
}

RunTrace minimize(const CostFunction& cost, const Box& box, const SnmConfig& cfg) {
  StochasticNelderMead snm(cost, box, cfg);
  while (snm.iteration() < cfg.max_iterations && snm.iterate()) {
  }
  RunTrace trace = snm.take_trace();
  if (trace.records.empty()) {
    // No iteration ran; report the initial design.
    trace.evaluations = snm.evaluations();
    if (snm.simplex().size() > 0) {
      trace.best_cost = snm.simplex().best().cost;
      trace.best_knobs = snm.simplex().best().knobs;
    }
  }
  return trace;
}

}  // namespace bellopt::snm
