#include "bellopt/baselines.hpp"
#include "bellopt/snm.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace bellopt::snm;

namespace {

double bowl(std::span<const double> t) {
  double s = 0.0;
  for (double x : t) s += (x - 0.3) * (x - 0.3);
  return s;
}

// Rastrigin-type landscape on [-1, 1]^d: global minimum 0 at 0.3 in every
// coordinate, local minima on a 0.1 lattice around it.
double rugged(std::span<const double> t) {
  double s = 0.0;
  for (double x : t) {
    const double d = x - 0.3;
    s += d * d + 0.3 * (1.0 - std::cos(20.0 * std::numbers::pi * d));
  }
  return s;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

SnmConfig config(std::uint64_t seed, long iterations) {
  SnmConfig c;
  c.seed = seed;
  c.max_iterations = iterations;
  return c;
}

}  // namespace

TEST(Box, ClipContainsAndErrors) {
  const Box b({0.0, -1.0}, {1.0, 1.0});
  EXPECT_EQ(b.dim(), 2u);
  EXPECT_EQ(b.width(1), 2.0);
  EXPECT_EQ(b.clip({2.0, -3.0}), (Point{1.0, -1.0}));
  EXPECT_TRUE(b.contains(std::vector<double>{0.5, 0.0}));
  EXPECT_FALSE(b.contains(std::vector<double>{0.5, 1.5}));
  EXPECT_FALSE(b.contains(std::vector<double>{0.5}));
  EXPECT_THROW(Box({0.0}, {0.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(Box({1.0}, {0.0}), std::invalid_argument);
}

TEST(Config, Validation) {
  SnmConfig c;
  EXPECT_NO_THROW(c.validate());
  c.reflection = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.expansion = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.contraction = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.ars_radius = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.ars_max_tries = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_EQ(SnmConfig{}.reflection, 1.0);
  EXPECT_EQ(SnmConfig{}.contraction, 0.5);
  EXPECT_EQ(SnmConfig{}.expansion, 2.0);
  EXPECT_EQ(SnmConfig{}.ars_radius, 0.1);
  EXPECT_EQ(SnmConfig{}.ars_max_tries, 10);
}

TEST(LatinHypercube, OnePointPerStratum1D) {
  std::mt19937_64 rng(1);
  const auto pts = latin_hypercube(4, Box::uniform(1, 0.0, 1.0), rng);
  std::set<int> strata;
  for (const auto& p : pts) strata.insert(static_cast<int>(std::floor(p[0] * 4.0)));
  EXPECT_EQ(strata, (std::set<int>{0, 1, 2, 3}));
}

TEST(LatinHypercube, StratifiedPerCoordinate) {
  std::mt19937_64 rng(2);
  const Box box({-1, 0, 2, 0, 0, 0, 0, -5}, {1, 1, 3, 6, 1, 1, 1, 5});
  for (int rep = 0; rep < 50; ++rep) {
    const auto pts = latin_hypercube(9, box, rng);
    ASSERT_EQ(pts.size(), 9u);
    for (std::size_t d = 0; d < 8; ++d) {
      std::vector<int> hist(9, 0);
      for (const auto& p : pts) {
        ASSERT_TRUE(box.contains(p));
        const int s = static_cast<int>((p[d] - box.lower(d)) / box.width(d) * 9.0);
        ++hist[std::min(s, 8)];
      }
      for (int h : hist) ASSERT_EQ(h, 1);
    }
  }
}

TEST(LatinHypercube, ReproducibleAndErrors) {
  std::mt19937_64 a(3), b(3);
  const Box box = Box::uniform(3, 0.0, 1.0);
  EXPECT_EQ(latin_hypercube(5, box, a), latin_hypercube(5, box, b));
  EXPECT_THROW(latin_hypercube(0, box, a), std::invalid_argument);
  EXPECT_THROW(latin_hypercube(3, Box({0.0, 1.0}, {1.0, 1.0}), a), std::invalid_argument);
}

TEST(Steps, Algebra) {
  const Point bar{1.0, -2.0, 0.5}, worst{3.0, 1.0, -0.25};
  const Point ref = reflect(bar, worst, 1.0);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(ref[i], 2.0 * bar[i] - worst[i]);
  const Point exp = expand(ref, bar, 2.0);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(exp[i], 2.0 * ref[i] - bar[i]);
  const Point ext = contract(ref, bar, 0.5);
  const Point in = contract(worst, bar, 0.5);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(ext[i], 0.5 * ref[i] + 0.5 * bar[i]);
    EXPECT_EQ(in[i], 0.5 * worst[i] + 0.5 * bar[i]);
  }
  EXPECT_EQ(reflect(bar, worst, 0.5)[0], 1.5 * 1.0 - 0.5 * 3.0);
}

TEST(Simplex, SortTrimBarycenter) {
  Simplex s(3);
  s.add({{0.0}, 3.0});
  s.add({{1.0}, 1.0});
  s.add({{2.0}, 2.0});
  s.add({{3.0}, 0.5});
  s.trim();
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.best().cost, 0.5);
  EXPECT_EQ(s.worst().cost, 2.0);
  EXPECT_EQ(s.second_worst().cost, 1.0);
  EXPECT_EQ(s.barycenter_without_worst(), (Point{2.0}));
}

TEST(Simplex, TiesKeepTheNewestPoint) {
  Simplex s(2);
  s.add({{0.0}, 1.0});
  s.add({{1.0}, 2.0});
  s.add({{5.0}, 2.0});  // same cost as the worst, arrives last
  s.trim();
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.worst().knobs, (Point{5.0}));
}

TEST(Ars, FlatLandscapeStaysNearBest) {
  std::mt19937_64 rng(4);
  const Box box = Box::uniform(3, 0.0, 10.0);
  Simplex s(4);
  s.add({{5.0, 5.0, 5.0}, 1.0});
  s.add({{1.0, 2.0, 3.0}, 1.0});
  s.add({{9.0, 8.0, 7.0}, 1.0});
  s.add({{0.0, 0.0, 0.0}, 1.0});
  s.sort();
  const auto flat = [](std::span<const double>) { return 1.0; };
  for (int i = 0; i < 200; ++i) {
    const ArsResult r = ars_step(s, box, 0.1, 10, rng, flat);
    EXPECT_FALSE(r.improved);
    EXPECT_EQ(r.evaluations, 10);
    for (int d = 0; d < 3; ++d) EXPECT_LE(std::abs(r.vertex.knobs[d] - s.best().knobs[d]), 1.0);
  }
}

TEST(Ars, SingleImprovingTryReplacesWorst) {
  std::mt19937_64 rng(5);
  const Box box = Box::uniform(2, 0.0, 1.0);
  Simplex s(3);
  s.add({{0.5, 0.5}, 1.0});
  s.add({{0.2, 0.2}, 2.0});
  s.add({{0.9, 0.9}, 3.0});
  s.sort();
  const ArsResult r = ars_step(s, box, 0.1, 1, rng, [](std::span<const double>) { return 0.0; });
  EXPECT_TRUE(r.improved);
  EXPECT_EQ(r.evaluations, 1);
  s.add(r.vertex);
  s.trim();
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.best().cost, 0.0);
  EXPECT_EQ(s.worst().cost, 2.0);
  EXPECT_THROW(ars_step(s, box, 0.1, 0, rng, bowl), std::invalid_argument);
}

TEST(Ars, StaysInsideBoxOnRandomLandscapes) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Box box({-1.0, 0.0, 2.0}, {1.0, 0.5, 2.1});
  for (int i = 0; i < 1000; ++i) {
    Simplex s(4);
    for (int p = 0; p < 4; ++p) {
      Point x{box.lower(0) + u(rng) * 2.0, u(rng) * 0.5, 2.0 + u(rng) * 0.1};
      if (p == 0) x = box.lower();  // best sits on a corner
      s.add({x, p == 0 ? -1.0 : u(rng)});
    }
    s.sort();
    bool inside = true;
    const auto noise = [&](std::span<const double> t) {
      inside = inside && box.contains(t);
      return u(rng);
    };
    const ArsResult r = ars_step(s, box, 0.3, 10, rng, noise);
    ASSERT_TRUE(inside);
    ASSERT_TRUE(box.contains(r.vertex.knobs));
  }
}

TEST(Minimize, ConvexSanity) {
  // Median over seeds; single runs need between ~200 and ~700 iterations.
  const Box box = Box::uniform(8, 0.0, 1.0);
  std::vector<double> best;
  for (std::uint64_t seed = 0; seed < 21; ++seed) {
    const RunTrace t = minimize(bowl, box, config(seed, 400));
    EXPECT_EQ(t.records.size(), 400u);
    best.push_back(t.best_cost);
  }
  EXPECT_LT(median(best), 1e-6);
  const RunTrace long_run = minimize(bowl, box, config(7, 1500));
  EXPECT_LT(long_run.best_cost, 1e-12);
  for (double x : long_run.best_knobs) EXPECT_NEAR(x, 0.3, 1e-6);
}

TEST(Minimize, TraceIsMonotoneAndConsistent) {
  std::mt19937_64 noise_rng(8);
  std::normal_distribution<double> n(0.0, 0.3);
  const auto noisy = [&](std::span<const double> t) { return bowl(t) + n(noise_rng); };
  const RunTrace t = minimize(noisy, Box::uniform(5, -2.0, 2.0), config(9, 500));
  ASSERT_EQ(t.records.size(), 500u);
  for (std::size_t i = 1; i < t.records.size(); ++i) {
    EXPECT_LE(t.records[i].best_cost, t.records[i - 1].best_cost);
    EXPECT_GT(t.records[i].evaluations, t.records[i - 1].evaluations);
    EXPECT_EQ(t.records[i].iteration, static_cast<long>(i) + 1);
  }
  EXPECT_EQ(t.best_cost, t.records.back().best_cost);
  EXPECT_EQ(t.best_knobs, t.records.back().best_knobs);
  EXPECT_EQ(t.evaluations, t.records.back().evaluations);
}

TEST(MinimizeProperty, BoxConfinementAndSimplexSize) {
  // 100 runs x 1000 iterations on a noisy cost whose minimum sits outside
  // the box, pushing every step against the walls.
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  long iterations = 0;
  for (int run = 0; run < 100; ++run) {
    const Box box({-1.0, 0.0, 0.2, -3.0}, {0.0, 0.1, 0.4, 3.0});
    bool inside = true;
    const auto cost = [&](std::span<const double> t) {
      inside = inside && box.contains(t);
      return t[0] * -1.0 + t[1] * 5.0 - t[3] + 0.2 * u(rng);
    };
    SnmConfig cfg = config(100 + run, 0);
    StochasticNelderMead snm(cost, box, cfg);
    for (int i = 0; i < 1000; ++i) {
      ASSERT_TRUE(snm.iterate());
      ASSERT_EQ(snm.simplex().size(), box.dim() + 1);
      for (const auto& v : snm.simplex().points()) ASSERT_TRUE(box.contains(v.knobs));
      ++iterations;
    }
    ASSERT_TRUE(inside);
  }
  EXPECT_EQ(iterations, 100000);
}

TEST(Minimize, EvaluationBudgetIsExact) {
  for (long budget : {1L, 5L, 9L, 10L, 37L, 500L}) {
    SnmConfig cfg = config(11, 100000);
    cfg.max_evaluations = budget;
    long calls = 0;
    const auto counted = [&](std::span<const double> t) {
      ++calls;
      return bowl(t);
    };
    const RunTrace t = minimize(counted, Box::uniform(8, 0.0, 1.0), cfg);
    EXPECT_EQ(calls, budget);
    EXPECT_EQ(t.evaluations, budget);
    if (!t.records.empty()) {
      EXPECT_LE(t.records.back().evaluations, budget);
    }
  }
}

TEST(Minimize, IterateStopsWhenBudgetSpent) {
  SnmConfig cfg = config(12, 0);
  cfg.max_evaluations = 9;  // the initial design alone
  StochasticNelderMead snm(bowl, Box::uniform(8, 0.0, 1.0), cfg);
  EXPECT_EQ(snm.evaluations(), 9);
  EXPECT_FALSE(snm.iterate());
  EXPECT_EQ(snm.iteration(), 0);
}

TEST(Minimize, SeedsReproduceAndDiffer) {
  const Box box = Box::uniform(4, 0.0, 1.0);
  EXPECT_EQ(minimize(bowl, box, config(13, 50)), minimize(bowl, box, config(13, 50)));
  EXPECT_NE(minimize(bowl, box, config(13, 50)), minimize(bowl, box, config(14, 50)));
}

TEST(MinimizeProperty, NoiseRobustness) {
  // Error is the noise-free cost at the reported best point. A smooth bowl
  // is solved to machine precision without noise, which makes a ratio
  // meaningless, so the comparison runs on a multimodal landscape.
  const Box box = Box::uniform(4, -1.0, 1.0);
  std::vector<double> clean, noisy;
  for (int run = 0; run < 50; ++run) {
    clean.push_back(rugged(minimize(rugged, box, config(200 + run, 1000)).best_knobs));
    std::mt19937_64 nrng(300 + run);
    std::normal_distribution<double> n(0.0, 0.05);
    const auto f = [&](std::span<const double> t) { return rugged(t) + n(nrng); };
    noisy.push_back(rugged(minimize(f, box, config(200 + run, 1000)).best_knobs));
  }
  const double mc = median(clean), mn = median(noisy);
  RecordProperty("median_clean", std::to_string(mc));
  RecordProperty("median_noisy", std::to_string(mn));
  std::printf("median final error: noiseless %.4g, noisy %.4g\n", mc, mn);
  EXPECT_GT(mc, 0.0);
  EXPECT_LE(mn, 3.0 * mc);
}

TEST(Grid, EightDimsThreeSamples) {
  long calls = 0;
  const auto counted = [&](std::span<const double> t) {
    ++calls;
    return bowl(t);
  };
  const RunTrace t = grid_search(counted, Box::uniform(8, 0.0, 1.0), 3, 1);
  EXPECT_EQ(calls, 6561);
  EXPECT_EQ(t.evaluations, 6561);
  EXPECT_EQ(t.records.size(), 6561u);
}

TEST(Grid, TwoByTwoCorners) {
  std::vector<Point> seen;
  const auto record = [&](std::span<const double> t) {
    seen.emplace_back(t.begin(), t.end());
    return 0.0;
  };
  grid_search(record, Box::uniform(2, 0.0, 1.0), 2, 5);
  ASSERT_EQ(seen.size(), 4u);
  const Point o = seen.front();
  EXPECT_GE(o[0], 0.0);
  EXPECT_LT(o[0], 0.5);
  EXPECT_GE(o[1], 0.0);
  EXPECT_LT(o[1], 0.5);
  std::set<std::pair<double, double>> pts;
  for (const auto& p : seen) pts.insert({p[0] - o[0], p[1] - o[1]});
  EXPECT_EQ(pts, (std::set<std::pair<double, double>>{{0, 0}, {0, 0.5}, {0.5, 0}, {0.5, 0.5}}));
}

TEST(Grid, BestPointWithinHalfCellDiagonal) {
  const Box box = Box::uniform(3, 0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (int n : {4, 7, 10}) {
      const RunTrace t = grid_search(bowl, box, n, seed);
      double d2 = 0.0;
      for (double x : t.best_knobs) d2 += (x - 0.3) * (x - 0.3);
      EXPECT_LE(std::sqrt(d2), 0.5 * std::sqrt(3.0) / n + 1e-12);
    }
  }
}

TEST(Grid, Errors) {
  EXPECT_THROW(grid_search(bowl, Box::uniform(2, 0.0, 1.0), 1, 0), std::invalid_argument);
  EXPECT_THROW(grid_search(bowl, Box::uniform(8, 0.0, 1.0), 3, 0, 6560), std::invalid_argument);
}

TEST(RandomSearch, EmptyBudget) {
  const RunTrace t = random_search(bowl, Box::uniform(3, 0.0, 1.0), 0, 1);
  EXPECT_TRUE(t.records.empty());
  EXPECT_EQ(t.evaluations, 0);
  EXPECT_THROW(random_search(bowl, Box::uniform(3, 0.0, 1.0), -1, 1), std::invalid_argument);
}

TEST(RandomSearch, ReproducibleMonotoneInBox) {
  const Box box({0.0, -2.0}, {1.0, 2.0});
  const RunTrace a = random_search(bowl, box, 300, 9);
  EXPECT_EQ(a, random_search(bowl, box, 300, 9));
  EXPECT_NE(a, random_search(bowl, box, 300, 10));
  ASSERT_EQ(a.records.size(), 300u);
  for (std::size_t i = 1; i < a.records.size(); ++i) {
    EXPECT_LE(a.records[i].best_cost, a.records[i - 1].best_cost);
    EXPECT_EQ(a.records[i].evaluations, static_cast<long>(i) + 1);
  }
  EXPECT_TRUE(box.contains(a.best_knobs));
}
