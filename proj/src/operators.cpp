#include "karamata/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "karamata/numerics.hpp"

namespace karamata::operators {

namespace {

Point sub(const Point& a, const Point& b) {
  Point r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_dim(const Point& p, size_t n, const char* who) {
  if (p.size() != n) throw std::invalid_argument(std::string(who) + ": bad point dimension");
}

}  // namespace

double norm(const Point& p) { return std::sqrt(dot(p, p)); }
double dist(const Point& a, const Point& b) { return norm(sub(a, b)); }

double gamma_fn(double x) {
  double ax = std::abs(x);
  if (ax > 0.5) {
    if (ax > 0.5 * (1.0 + 1e-12)) throw std::domain_error("gamma_fn: |x| must be <= 0.5");
    ax = 0.5;
  }
  if (ax == 0.0) return 0.0;
  double w = numerics::lambert_wm1(-ax / 2.0);
  double e = 2.0 * w;
  if (e < -708.0) return 0.0;  // materialize zero below representable range
  return std::exp(e);
}

double gamma_half() {
  static const double v = gamma_fn(0.5);
  return v;
}

double gamma_inv(double y) {
  // -sqrt(y)ln(y) is increasing up to y = e^-2; past that it stops being an
  // inverse of anything here
  if (y < 0.0 || y > std::exp(-2.0) * (1.0 + 1e-12)) {
    throw std::domain_error("gamma_inv: y outside [0, e^-2]");
  }
  if (y == 0.0) return 0.0;
  return -std::sqrt(y) * std::log(y);
}

namespace {

// derivative of gamma on (0, 0.5]; positive there
double gamma_deriv(double x) {
  double w = numerics::lambert_wm1(-x / 2.0);
  double e = 2.0 * w;
  if (e < -708.0) return 0.0;
  return 2.0 * std::exp(e) * w / (x * (1.0 + w));
}

struct Generator {
  std::function<double(double)> g;   // on [0, xc]
  std::function<double(double)> gp;  // derivative on (0, xc]
  double xc;
};

Generator generator_for(const SetDescriptor& set) {
  switch (set.kind) {
    case SetKind::gamma_epigraph:
      return {[](double x) { return gamma_fn(x); },
              [](double x) { return gamma_deriv(x); }, 0.5};
    case SetKind::power_epigraph: {
      double p = set.power;
      return {[p](double x) { return std::pow(x, p); },
              [p](double x) { return p * std::pow(x, p - 1.0); }, set.x_cap};
    }
    case SetKind::flat_epigraph: {
      double q = set.flat_q;
      return {[q](double x) {
                if (x <= 0.0) return 0.0;
                double e = -std::pow(x, -q);
                return e < -708.0 ? 0.0 : std::exp(e);
              },
              [q](double x) {
                double e = -std::pow(x, -q);
                if (e < -700.0) return 0.0;
                return q * std::pow(x, -q - 1.0) * std::exp(e);
              },
              set.x_cap};
    }
    default:
      throw std::logic_error("generator_for: not an epigraph kind");
  }
}

// Projection onto { (x, mu) : |x| <= xc, g(|x|) <= mu } with g convex even,
// g(0) = 0, increasing on [0, xc]. Solved by the stationarity equation of the
// squared distance in |x|, with corner candidates at the cap.
Point project_epigraph(const Generator& gen, const Point& p) {
  double a = std::abs(p[0]);
  double sign = p[0] < 0.0 ? -1.0 : 1.0;
  double b = p[1];

  if (a <= gen.xc && gen.g(a) <= b) return p;  // inside

  // stationarity s(x) = (x - a) + (g(x) - b) g'(x) on [0, xc]
  auto s = [&](double x) { return (x - a) + (gen.g(x) - b) * gen.gp(x); };

  double xbar;
  double lo = 0.0, hi = gen.xc;
  double s_hi = s(hi);
  if (s_hi <= 0.0) {
    xbar = gen.xc;  // optimum pinned at the cap
  } else {
    // s(0+) = -a <= 0; bisection with Newton-free safeguard to high precision
    if (a == 0.0) {
      xbar = 0.0;
    } else {
      for (int it = 0; it < 200 && (hi - lo) > 1e-16 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        if (s(mid) > 0.0) hi = mid; else lo = mid;
      }
      xbar = 0.5 * (lo + hi);
    }
  }
  Point cand1{sign * xbar, gen.g(xbar)};
  // corner candidate covers points above the cap with mu beyond g(xc)
  Point cand2{sign * gen.xc, std::max(b, gen.g(gen.xc))};
  return dist(cand1, p) <= dist(cand2, p) ? cand1 : cand2;
}

// ---- exponential cone ----

bool exp_cone_member(const Point& p) {
  double x = p[0], y = p[1], z = p[2];
  if (y > 0.0) {
    if (z <= 0.0) return false;
    // z >= y*exp(x/y), log form
    return std::log(z) >= std::log(y) + x / y - 1e-15 * std::max(1.0, std::abs(x / y));
  }
  if (y == 0.0) return x <= 0.0 && z >= 0.0;
  return false;
}

// distance to the parametric boundary ray { (r*v, v, v*e^r) : v > 0 } with the
// inner minimization over v solved in closed form
double surface_v_star(double r, const Point& p) {
  double x = p[0], y = p[1], z = p[2];
  if (r > 30.0) {
    double emr = std::exp(-r);
    double num = emr * emr * (r * x + y) + emr * z;
    double den = emr * emr * (r * r + 1.0) + 1.0;
    return num / den;
  }
  double er = std::exp(r);
  double num = r * x + y + er * z;
  double den = r * r + 1.0 + er * er;
  return num / den;
}

double surface_dist_sq(double r, const Point& p) {
  double v = surface_v_star(r, p);
  if (!(v > 0.0)) return std::numeric_limits<double>::infinity();
  double er = std::exp(std::min(r, 700.0));
  double q1 = r * v, q2 = v, q3 = v * er;
  double dx = p[0] - q1, dy = p[1] - q2, dz = p[2] - q3;
  return dx * dx + dy * dy + dz * dz;
}

// d/dr of the squared distance at the inner optimum (envelope form)
double surface_dist_sq_deriv(double r, const Point& p) {
  double v = surface_v_star(r, p);
  if (!(v > 0.0)) return 0.0;
  double er = std::exp(std::min(r, 700.0));
  double q1 = r * v, q3 = v * er;
  // dq/dr at fixed v = (v, 0, v*e^r)
  return -2.0 * ((p[0] - q1) * v + (p[2] - q3) * v * er);
}

Point project_exp_cone(const Point& p) {
  if (exp_cone_member(p)) return p;

  std::vector<Point> candidates;
  // face { x1 <= 0, x2 = 0, x3 >= 0 }
  candidates.push_back({std::min(p[0], 0.0), 0.0, std::max(p[2], 0.0)});

  // boundary surface: coarse scan over the slope variable, dense sub-scan of
  // the winning cell, then shrink and polish against the stationarity sign
  std::vector<double> grid;
  for (int i = 0; i <= 800; ++i) grid.push_back(-40.0 + 80.0 * i / 800.0);
  for (int i = 1; i <= 62; ++i) {
    grid.push_back(40.0 + i * 11.0);
    grid.insert(grid.begin(), -40.0 - i * 11.0);
  }
  size_t best_i = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < grid.size(); ++i) {
    double d = surface_dist_sq(grid[i], p);
    if (d < best_d) { best_d = d; best_i = i; }
  }
  if (std::isfinite(best_d)) {
    double lo = grid[best_i > 0 ? best_i - 1 : 0];
    double hi = grid[std::min(best_i + 1, grid.size() - 1)];
    // dense pass guards against wiggles wider than the ternary assumption
    double best_r = grid[best_i];
    for (int i = 0; i <= 160; ++i) {
      double r = lo + (hi - lo) * i / 160.0;
      double d = surface_dist_sq(r, p);
      if (d < best_d) { best_d = d; best_r = r; }
    }
    double cell = (hi - lo) / 160.0;
    lo = best_r - cell;
    hi = best_r + cell;
    for (int it = 0; it < 160 && (hi - lo) > 1e-9 * std::max(1.0, std::abs(best_r)); ++it) {
      double m1 = lo + (hi - lo) / 3.0;
      double m2 = hi - (hi - lo) / 3.0;
      if (surface_dist_sq(m1, p) < surface_dist_sq(m2, p)) hi = m2; else lo = m1;
    }
    double r = 0.5 * (lo + hi);
    double span = std::max(1e-5, 1e-7 * std::abs(r));
    double blo = r - span, bhi = r + span;
    if (surface_dist_sq_deriv(blo, p) < 0.0 && surface_dist_sq_deriv(bhi, p) > 0.0) {
      for (int it = 0; it < 90 && (bhi - blo) > 1e-16 * std::max(1.0, std::abs(r)); ++it) {
        double mid = 0.5 * (blo + bhi);
        if (surface_dist_sq_deriv(mid, p) > 0.0) bhi = mid; else blo = mid;
      }
      r = 0.5 * (blo + bhi);
    }
    double v = surface_v_star(r, p);
    if (v > 0.0) {
      double er = std::exp(std::min(r, 700.0));
      candidates.push_back({r * v, v, v * er});
    }
  }

  Point best = candidates.front();
  double bd = dist(best, p);
  for (size_t i = 1; i < candidates.size(); ++i) {
    double d = dist(candidates[i], p);
    if (d < bd) { bd = d; best = candidates[i]; }
  }
  return best;
}

}  // namespace

bool exp_cone_polar_member(const Point& p, double tol) {
  double x = p[0], y = p[1], z = p[2];
  if (x > 0.0) {
    if (z >= 0.0) return false;
    // -e*z >= x*exp(y/x), log form
    return 1.0 + std::log(-z) >= std::log(x) + y / x - tol;
  }
  if (x == 0.0) return y <= tol && z <= tol;
  return false;
}

SetDescriptor make_affine(Point anchor, std::vector<Point> basis) {
  SetDescriptor s;
  s.kind = SetKind::affine;
  s.anchor = std::move(anchor);
  s.basis = std::move(basis);
  s.dim = static_cast<int>(s.anchor.size());
  return s;
}

SetDescriptor make_halfspace(Point normal, double offset) {
  SetDescriptor s;
  s.kind = SetKind::halfspace;
  s.normal = std::move(normal);
  s.offset = offset;
  s.dim = static_cast<int>(s.normal.size());
  return s;
}

SetDescriptor make_exp_cone() {
  SetDescriptor s;
  s.kind = SetKind::exp_cone;
  s.dim = 3;
  return s;
}

SetDescriptor make_gamma_epigraph() {
  SetDescriptor s;
  s.kind = SetKind::gamma_epigraph;
  s.dim = 2;
  s.x_cap = 0.5;
  return s;
}

SetDescriptor make_power_epigraph(double power, double x_cap) {
  if (!(power >= 1.0)) throw std::invalid_argument("make_power_epigraph: power >= 1 required");
  SetDescriptor s;
  s.kind = SetKind::power_epigraph;
  s.dim = 2;
  s.power = power;
  s.x_cap = x_cap;
  return s;
}

SetDescriptor make_flat_epigraph(double q) {
  if (!(q > 0.0)) throw std::invalid_argument("make_flat_epigraph: q must be positive");
  SetDescriptor s;
  s.kind = SetKind::flat_epigraph;
  s.dim = 2;
  s.flat_q = q;
  // keep inside the convexity region of exp(-x^-q)
  s.x_cap = 0.9 * std::pow(q / (q + 1.0), 1.0 / q);
  return s;
}

SetDescriptor make_x_axis_plane(int dim, std::vector<int> zero_coords) {
  SetDescriptor s;
  s.kind = SetKind::x_axis_plane;
  s.dim = dim;
  s.zero_coords = std::move(zero_coords);
  return s;
}

SetDescriptor make_dr_fix_ray() {
  SetDescriptor s;
  s.kind = SetKind::dr_fix_ray;
  s.dim = 2;
  return s;
}

SetDescriptor make_singleton(Point p) {
  SetDescriptor s;
  s.kind = SetKind::singleton;
  s.anchor = std::move(p);
  s.dim = static_cast<int>(s.anchor.size());
  return s;
}

SetDescriptor make_box(Point lo, Point hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("make_box: size mismatch");
  for (size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] <= hi[i])) throw std::invalid_argument("make_box: lo > hi");
  }
  SetDescriptor s;
  s.kind = SetKind::box;
  s.box_lo = std::move(lo);
  s.box_hi = std::move(hi);
  s.dim = static_cast<int>(s.box_lo.size());
  return s;
}

Point project(const SetDescriptor& set, const Point& p) {
  switch (set.kind) {
    case SetKind::affine: {
      check_dim(p, set.anchor.size(), "project(affine)");
      Point d = sub(p, set.anchor);
      Point out = set.anchor;
      for (const auto& b : set.basis) {
        double c = dot(d, b);
        for (size_t i = 0; i < out.size(); ++i) out[i] += c * b[i];
      }
      return out;
    }
    case SetKind::halfspace: {
      check_dim(p, set.normal.size(), "project(halfspace)");
      double nn = dot(set.normal, set.normal);
      double excess = dot(set.normal, p) - set.offset;
      if (excess <= 0.0) return p;
      Point out = p;
      for (size_t i = 0; i < out.size(); ++i) out[i] -= excess * set.normal[i] / nn;
      return out;
    }
    case SetKind::exp_cone:
      check_dim(p, 3, "project(exp_cone)");
      return project_exp_cone(p);
    case SetKind::gamma_epigraph:
    case SetKind::power_epigraph:
    case SetKind::flat_epigraph:
      check_dim(p, 2, "project(epigraph)");
      return project_epigraph(generator_for(set), p);
    case SetKind::x_axis_plane: {
      check_dim(p, static_cast<size_t>(set.dim), "project(x_axis_plane)");
      Point out = p;
      for (int i : set.zero_coords) out[i] = 0.0;
      return out;
    }
    case SetKind::dr_fix_ray: {
      check_dim(p, 2, "project(dr_fix_ray)");
      return {0.0, std::max(p[1], 0.0)};
    }
    case SetKind::singleton:
      check_dim(p, set.anchor.size(), "project(singleton)");
      return set.anchor;
    case SetKind::box: {
      check_dim(p, set.box_lo.size(), "project(box)");
      Point out = p;
      for (size_t i = 0; i < out.size(); ++i) {
        out[i] = std::clamp(out[i], set.box_lo[i], set.box_hi[i]);
      }
      return out;
    }
  }
  throw std::logic_error("project: unknown set kind");
}

bool member(const SetDescriptor& set, const Point& p, double tol) {
  if (set.kind == SetKind::exp_cone && exp_cone_member(p)) return true;
  return dist(project(set, p), p) <= tol;
}

bool has_distance_formula(const SetDescriptor& set) {
  switch (set.kind) {
    case SetKind::affine:
    case SetKind::halfspace:
    case SetKind::x_axis_plane:
    case SetKind::dr_fix_ray:
    case SetKind::singleton:
    case SetKind::box:
      return true;
    default:
      return false;
  }
}

double distance_to(const SetDescriptor& set, const Point& p) {
  switch (set.kind) {
    case SetKind::affine:
      return dist(project(set, p), p);
    case SetKind::halfspace: {
      double excess = dot(set.normal, p) - set.offset;
      return std::max(0.0, excess) / norm(set.normal);
    }
    case SetKind::x_axis_plane: {
      double s = 0.0;
      for (int i : set.zero_coords) s += p[i] * p[i];
      return std::sqrt(s);
    }
    case SetKind::dr_fix_ray: {
      double mu = std::min(p[1], 0.0);
      return std::sqrt(p[0] * p[0] + mu * mu);
    }
    case SetKind::singleton:
      return dist(p, set.anchor);
    case SetKind::box: {
      double s = 0.0;
      for (size_t i = 0; i < set.box_lo.size(); ++i) {
        double d = std::max({set.box_lo[i] - p[i], p[i] - set.box_hi[i], 0.0});
        s += d * d;
      }
      return std::sqrt(s);
    }
    default:
      throw std::invalid_argument("distance_to: set kind has no exact distance formula");
  }
}

FixedPointOperator projection_op(SetDescriptor set) {
  FixedPointOperator op;
  SetDescriptor s = set;
  op.apply = [s](const Point& p) { return project(s, p); };
  op.alpha = 0.5;
  op.fix_set = std::move(set);
  return op;
}

FixedPointOperator dr_operator(const FixedPointOperator& PA,
                               const FixedPointOperator& PB,
                               std::optional<SetDescriptor> fix_set) {
  FixedPointOperator op;
  auto pa = PA.apply;
  auto pb = PB.apply;
  op.apply = [pa, pb](const Point& w) {
    Point a = pa(w);
    Point reflected(w.size());
    for (size_t i = 0; i < w.size(); ++i) reflected[i] = 2.0 * a[i] - w[i];
    Point b = pb(reflected);
    Point out(w.size());
    for (size_t i = 0; i < w.size(); ++i) out[i] = w[i] + b[i] - a[i];
    return out;
  };
  op.alpha = 0.5;
  op.fix_set = std::move(fix_set);
  return op;
}

std::function<Point(const Point&)> average(
    const std::vector<FixedPointOperator>& ops, const std::vector<double>& weights) {
  if (ops.size() != weights.size()) {
    throw std::invalid_argument("average: ops/weights size mismatch");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("average: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("average: weights must sum to 1");
  }
  auto ops_copy = ops;
  auto w_copy = weights;
  return [ops_copy, w_copy](const Point& x) {
    Point out(x.size(), 0.0);
    for (size_t i = 0; i < ops_copy.size(); ++i) {
      if (w_copy[i] == 0.0) continue;
      Point t = ops_copy[i].apply(x);
      for (size_t j = 0; j < out.size(); ++j) out[j] += w_copy[i] * t[j];
    }
    return out;
  };
}

double residual(const Point& x, std::span<const FixedPointOperator> ops) {
  double r = 0.0;
  for (const auto& op : ops) r = std::max(r, dist(x, op.apply(x)));
  return r;
}

}  // namespace karamata::operators
