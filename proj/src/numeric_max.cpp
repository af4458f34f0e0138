// Multi-start maximization of a Bell functional over projective qubit
// measurements for a known state. Used only to obtain reference values; it
// works directly with the correlation matrix T and the local Bloch vectors,
// so E_xy = u_x^T T v_y and <A_x> = u_x . a, <B_y> = v_y . b.

#include "bellopt/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace bellopt::bell {

namespace {

using quantum::Matrix3;
using quantum::Vector3;
using Vectors = std::vector<Vector3>;

struct LinearForm {
  int k = 2;
  std::vector<double> c;   // k*k correlator coefficients
  std::vector<double> ma;  // Alice marginal coefficients
  std::vector<double> mb;  // Bob marginal coefficients

  double& at(int x, int y) { return c[static_cast<std::size_t>(x * k + y)]; }
  double at(int x, int y) const { return c[static_cast<std::size_t>(x * k + y)]; }
};

LinearForm blank_form(int k) {
  return {k, std::vector<double>(static_cast<std::size_t>(k * k), 0.0),
          std::vector<double>(static_cast<std::size_t>(k), 0.0),
          std::vector<double>(static_cast<std::size_t>(k), 0.0)};
}

double form_value(const LinearForm& f, const Matrix3& t, const Vector3& sa, const Vector3& sb,
                  const Vectors& u, const Vectors& v) {
  double s = 0.0;
  for (int x = 0; x < f.k; ++x) {
    for (int y = 0; y < f.k; ++y) {
      if (f.at(x, y) != 0.0) s += f.at(x, y) * u[x].dot(t * v[y]);
    }
    s += f.ma[x] * u[x].dot(sa) + f.mb[x] * v[x].dot(sb);
  }
  return s;
}

// Chained terms: I_i = (E_{i-1,i-1} + sign * E_{i mod k, i-1}) / 2 with the
// last term's A^k = -A^0 sign flip; |I_i| = s_i I_i for the optimal s_i.
LinearForm chained_form(int k, const std::vector<double>& signs) {
  LinearForm f = blank_form(k);
  for (int i = 1; i <= k; ++i) {
    const double s = signs[static_cast<std::size_t>(i - 1)];
    f.at(i - 1, i - 1) += 0.5 * s;
    if (i == k) {
      f.at(0, k - 1) -= 0.5 * s;
    } else {
      f.at(i, i - 1) += 0.5 * s;
    }
  }
  return f;
}

std::vector<double> chained_signs(int k, const Matrix3& t, const Vectors& u, const Vectors& v) {
  std::vector<double> signs(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) {
    const double same = u[i - 1].dot(t * v[i - 1]);
    const double next = i == k ? -u[0].dot(t * v[k - 1]) : u[i].dot(t * v[i - 1]);
    signs[static_cast<std::size_t>(i - 1)] = same + next >= 0.0 ? 1.0 : -1.0;
  }
  return signs;
}

Vector3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    Vector3 v(g(rng), g(rng), g(rng));
    const double n = v.norm();
    if (n > 1e-9) return v / n;
  }
}

void assign_if_nonzero(Vector3& target, const Vector3& candidate) {
  const double n = candidate.norm();
  if (n > 1e-300) target = candidate / n;
}

quantum::BlochDirection to_direction(const Vector3& r) {
  const double z = std::clamp(r.z(), -1.0, 1.0);
  return quantum::BlochDirection::reduced(std::acos(z), std::atan2(r.y(), r.x()));
}

NumericMax seesaw(const Inequality& ineq, const quantum::DensityMatrix& rho,
                  const NumericMaxOptions& opts) {
  const int k = settings_per_party(ineq);
  const Matrix3 t = quantum::correlation_matrix(rho);
  const Vector3 sa = quantum::bloch_vector_a(rho);
  const Vector3 sb = quantum::bloch_vector_b(rho);
  const auto* chained = std::get_if<Chained>(&ineq);

  LinearForm fixed = blank_form(k);
  if (std::holds_alternative<Chsh>(ineq)) {
    fixed.at(0, 0) = fixed.at(0, 1) = fixed.at(1, 0) = 1.0;
    fixed.at(1, 1) = -1.0;
  } else if (const auto* tl = std::get_if<Tilted>(&ineq)) {
    fixed.at(0, 0) = fixed.at(0, 1) = tl->alpha;
    fixed.at(1, 0) = 1.0;
    fixed.at(1, 1) = -1.0;
    fixed.ma[0] = tl->beta;
  }

  std::mt19937_64 rng(opts.seed);
  NumericMax best;
  best.value = -std::numeric_limits<double>::infinity();
  Vectors best_u, best_v;

  for (int start = 0; start < std::max(1, opts.restarts); ++start) {
    Vectors u(static_cast<std::size_t>(k)), v(static_cast<std::size_t>(k));
    for (auto& x : u) x = random_unit(rng);
    for (auto& y : v) y = random_unit(rng);

    double previous = -std::numeric_limits<double>::infinity();
    double current = previous;
    for (int it = 0; it < 20000; ++it) {
      LinearForm f = chained ? chained_form(k, chained_signs(k, t, u, v)) : fixed;
      for (int y = 0; y < k; ++y) {
        Vector3 g = f.mb[y] * sb;
        for (int x = 0; x < k; ++x) g += f.at(x, y) * (t.transpose() * u[x]);
        assign_if_nonzero(v[y], g);
      }
      if (chained) f = chained_form(k, chained_signs(k, t, u, v));
      for (int x = 0; x < k; ++x) {
        Vector3 g = f.ma[x] * sa;
        for (int y = 0; y < k; ++y) g += f.at(x, y) * (t * v[y]);
        assign_if_nonzero(u[x], g);
      }
      if (chained) f = chained_form(k, chained_signs(k, t, u, v));
      current = form_value(f, t, sa, sb, u, v);
      if (it > 10 && current - previous < 1e-15) break;
      previous = current;
    }
    if (current > best.value) {
      best.value = current;
      best_u = u;
      best_v = v;
    }
  }
  for (const auto& x : best_u) best.alice.push_back(to_direction(x));
  for (const auto& y : best_v) best.bob.push_back(to_direction(y));
  // Report the functional on the exact table so callers see the same
  // quantity the oracle would produce.
  best.value = value(ineq, exact_table(rho, best.alice, best.bob));
  return best;
}

// Textbook Nelder-Mead with shrink, minimizing f from x0.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, double step, int max_evals) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
  std::vector<double> fx(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fx[i] = f(pts[i]);
  int evals = static_cast<int>(n + 1);

  std::vector<std::size_t> order(n + 1);
  while (evals < max_evals) {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return fx[a] < fx[b]; });
    const std::size_t lo = order[0], hi = order[n], nh = order[n - 1];
    if (std::abs(fx[hi] - fx[lo]) < 1e-15) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == hi) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d] / static_cast<double>(n);
    }
    auto along = [&](double s) {
      std::vector<double> p(n);
      for (std::size_t d = 0; d < n; ++d) p[d] = centroid[d] + s * (pts[hi][d] - centroid[d]);
      return p;
    };
    auto xr = along(-1.0);
    const double fr = f(xr);
    ++evals;
    if (fr < fx[lo]) {
      auto xe = along(-2.0);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        pts[hi] = xe, fx[hi] = fe;
      } else {
        pts[hi] = xr, fx[hi] = fr;
      }
    } else if (fr < fx[nh]) {
      pts[hi] = xr, fx[hi] = fr;
    } else {
      const bool outside = fr < fx[hi];
      auto xc = along(outside ? -0.5 : 0.5);
      const double fc = f(xc);
      ++evals;
      if (fc < (outside ? fr : fx[hi])) {
        pts[hi] = xc, fx[hi] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == lo) continue;
          for (std::size_t d = 0; d < n; ++d) pts[i][d] = pts[lo][d] + 0.5 * (pts[i][d] - pts[lo][d]);
          fx[i] = f(pts[i]);
          ++evals;
        }
      }
    }
  }
  const auto best = std::min_element(fx.begin(), fx.end()) - fx.begin();
  return pts[static_cast<std::size_t>(best)];
}

NumericMax angle_search(const Inequality& ineq, const quantum::DensityMatrix& rho,
                        const NumericMaxOptions& opts) {
  const int k = settings_per_party(ineq);
  const std::size_t dim = 4 * static_cast<std::size_t>(k);
  auto directions = [k](const std::vector<double>& a) {
    std::pair<std::vector<quantum::BlochDirection>, std::vector<quantum::BlochDirection>> d;
    for (int s = 0; s < k; ++s) {
      d.first.push_back(quantum::BlochDirection::reduced(a[2 * s], a[2 * s + 1]));
      d.second.push_back(quantum::BlochDirection::reduced(a[2 * (k + s)], a[2 * (k + s) + 1]));
    }
    return d;
  };
  auto cost = [&](const std::vector<double>& a) {
    const auto d = directions(a);
    return -value(ineq, exact_table(rho, d.first, d.second));
  };

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<double> best_x;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int start = 0; start < std::max(1, opts.restarts); ++start) {
    std::vector<double> x(dim);
    for (auto& v : x) v = angle(rng);
    x = nelder_mead(cost, x, 0.5, 20000);
    // Polishing restarts rebuild the simplex around the incumbent.
    for (int polish = 0; polish < 3; ++polish) x = nelder_mead(cost, x, 0.05, 20000);
    const double c = cost(x);
    if (c < best_cost) {
      best_cost = c;
      best_x = x;
    }
  }
  NumericMax out;
  const auto d = directions(best_x);
  out.alice = d.first;
  out.bob = d.second;
  out.value = -best_cost;
  return out;
}

}  // namespace

NumericMax numeric_quantum_max(const Inequality& ineq, const quantum::DensityMatrix& rho,
                               const NumericMaxOptions& opts) {
  validate(ineq);
  if (opts.restarts < 10) throw std::invalid_argument("numeric maximization needs >= 10 restarts");
  if (std::holds_alternative<Tlm>(ineq)) return angle_search(ineq, rho, opts);
  return seesaw(ineq, rho, opts);
}

}  // namespace bellopt::bell
