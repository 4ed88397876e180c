#include "karamata/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>

namespace karamata::solver {

QuasiCyclicSchedule ap_schedule(int m) {
  if (m != 2) throw std::invalid_argument("ap_schedule: alternation needs m = 2");
  QuasiCyclicSchedule s;
  s.m = 2;
  s.nu = 1.0;
  s.s = 2;
  s.weights_at = [](long k) {
    // (1,0) on even k, (0,1) on odd k
    return (k % 2 == 0) ? std::vector<double>{1.0, 0.0}
                        : std::vector<double>{0.0, 1.0};
  };
  return s;
}

QuasiCyclicSchedule dr_schedule() {
  QuasiCyclicSchedule s;
  s.m = 1;
  s.nu = 1.0;
  s.s = 1;
  s.weights_at = [](long) { return std::vector<double>{1.0}; };
  return s;
}

QuasiCyclicSchedule parallel_schedule(std::vector<double> weights) {
  double sum = 0.0, wmin = std::numeric_limits<double>::infinity();
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("parallel_schedule: weights must be positive");
    sum += w;
    wmin = std::min(wmin, w);
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("parallel_schedule: weights must sum to 1");
  }
  QuasiCyclicSchedule s;
  s.m = static_cast<int>(weights.size());
  s.nu = wmin;
  s.s = 1;
  auto w = std::move(weights);
  s.weights_at = [w](long) { return w; };
  return s;
}

bool check_schedule(const QuasiCyclicSchedule& sched, long horizon) {
  for (long k = 0; k < horizon; ++k) {
    std::vector<bool> covered(sched.m, false);
    for (long j = k; j < k + sched.s; ++j) {
      auto w = sched.weights_at(j);
      if (static_cast<int>(w.size()) != sched.m) return false;
      double sum = 0.0;
      for (int i = 0; i < sched.m; ++i) {
        sum += w[i];
        if (w[i] > 0.0) {
          if (w[i] < sched.nu - 1e-12) return false;
          covered[i] = true;
        }
      }
      if (std::abs(sum - 1.0) > 1e-12) return false;
    }
    for (bool c : covered) {
      if (!c) return false;
    }
  }
  return true;
}

std::string stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::max_iter: return "max_iter";
    case StopReason::residual_tol: return "residual_tol";
    case StopReason::dist_tol: return "dist_tol";
    case StopReason::numeric_failure: return "numeric_failure";
  }
  return "unknown";
}

namespace {

bool finite_point(const Point& p) {
  for (double v : p) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

IterationTrace run(const std::vector<FixedPointOperator>& ops,
                   const QuasiCyclicSchedule& sched, Point x0, StopRule stop,
                   std::optional<SetDescriptor> intersection) {
  if (static_cast<int>(ops.size()) != sched.m) {
    throw std::invalid_argument("run: schedule dimension does not match operators");
  }
  if (!(sched.nu > 0.0)) throw std::invalid_argument("run: nu must be positive");

  const bool have_dist =
      intersection && operators::has_distance_formula(*intersection);

  IterationTrace trace;
  trace.m = sched.m;
  trace.nu = sched.nu;
  trace.s = sched.s;
  trace.stop = StopReason::max_iter;
  auto t0 = std::chrono::steady_clock::now();

  constexpr long kDenseLimit = 100'000;
  long next_checkpoint = kDenseLimit;

  Point x = std::move(x0);
  for (long k = 0; k <= stop.max_iter; ++k) {
    double res = operators::residual(x, ops);
    bool record = k <= kDenseLimit;
    if (!record && k >= next_checkpoint) {
      record = true;
      next_checkpoint = std::max(next_checkpoint + 1,
                                 static_cast<long>(next_checkpoint * 1.05));
    }
    if (k == stop.max_iter) record = true;
    double wall = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0).count();
    std::optional<double> d;
    if (have_dist) d = operators::distance_to(*intersection, x);
    if (record) trace.records.push_back({k, x, res, d, wall});

    if (!finite_point(x) || !std::isfinite(res)) {
      trace.stop = StopReason::numeric_failure;
      break;
    }
    if (stop.residual_tol > 0.0 && res <= stop.residual_tol) {
      trace.stop = StopReason::residual_tol;
      if (!record) trace.records.push_back({k, x, res, d, wall});
      break;
    }
    if (stop.dist_tol && d && *d <= *stop.dist_tol) {
      trace.stop = StopReason::dist_tol;
      if (!record) trace.records.push_back({k, x, res, d, wall});
      break;
    }
    if (k == stop.max_iter) break;

    auto w = sched.weights_at(k);
    Point next(x.size(), 0.0);
    for (size_t i = 0; i < ops.size(); ++i) {
      if (w[i] == 0.0) continue;
      Point t = ops[i].apply(x);
      for (size_t j = 0; j < next.size(); ++j) next[j] += w[i] * t[j];
    }
    x = std::move(next);
  }
  return trace;
}

FejerReport audit_fejer(const IterationTrace& trace,
                        const std::vector<Point>& y_samples,
                        const std::vector<FixedPointOperator>& ops,
                        double slack) {
  for (const auto& y : y_samples) {
    if (operators::residual(y, ops) > 1e-8) {
      throw std::invalid_argument("audit_fejer: sample is not a common fixed point");
    }
  }
  FejerReport report;
  for (size_t yi = 0; yi < y_samples.size(); ++yi) {
    const auto& y = y_samples[yi];
    for (size_t i = 0; i + 1 < trace.records.size(); ++i) {
      double before = operators::dist(trace.records[i].x, y);
      double after = operators::dist(trace.records[i + 1].x, y);
      ++report.comparisons;
      if (after > before + slack) {
        report.violations.push_back(
            {trace.records[i].k, trace.records[i + 1].k, yi, after - before});
      }
    }
  }
  return report;
}

namespace {

// Halton sequence point in [0,1]^dim
double halton(long i, int base) {
  double f = 1.0, r = 0.0;
  long n = i;
  while (n > 0) {
    f /= base;
    r += f * (n % base);
    n /= base;
  }
  return r;
}

const int kBases[] = {2, 3, 5, 7, 11};

}  // namespace

regvar::RegFunc estimate_empirical_psi(const std::vector<FixedPointOperator>& ops,
                                       const SetDescriptor& intersection,
                                       double r,
                                       const std::vector<double>& a_grid,
                                       int samples_per_a) {
  if (!operators::has_distance_formula(intersection)) {
    throw std::invalid_argument("estimate_empirical_psi: intersection needs an exact distance formula");
  }
  if (!(r > 0.0)) throw std::invalid_argument("estimate_empirical_psi: r must be positive");
  if (a_grid.empty()) throw std::invalid_argument("estimate_empirical_psi: empty a grid");

  size_t dim = 0;
  for (const auto& op : ops) {
    if (op.fix_set) dim = std::max(dim, op.fix_set->anchor.size());
  }
  if (intersection.kind == operators::SetKind::singleton) dim = intersection.anchor.size();
  if (dim == 0) dim = static_cast<size_t>(intersection.dim);

  auto res_at = [&](const Point& y) { return operators::residual(y, ops); };

  // anchors inside the intersection, reached by projecting probes onto it
  std::vector<Point> anchors;
  {
    std::vector<Point> probes;
    probes.push_back(Point(dim, 0.0));
    for (long i = 1; i <= 4; ++i) {
      Point p(dim);
      for (size_t d = 0; d < dim; ++d) p[d] = r * (2.0 * halton(i, kBases[d]) - 1.0);
      probes.push_back(std::move(p));
    }
    for (auto& p : probes) {
      Point a = operators::project(intersection, p);
      bool dup = false;
      for (const auto& e : anchors) {
        if (operators::dist(e, a) < 1e-12) { dup = true; break; }
      }
      if (!dup && operators::norm(a) <= r + 1e-12) anchors.push_back(std::move(a));
    }
    if (anchors.empty()) anchors.push_back(operators::project(intersection, Point(dim, 0.0)));
  }

  int n_dirs = std::max(64, samples_per_a / (static_cast<int>(anchors.size()) * 4));
  if (dim <= 2) n_dirs = std::min(n_dirs, 256);
  else if (dim == 3) n_dirs = std::min(n_dirs, 1024);
  int n_ball = std::min(4096, std::max(64, samples_per_a / 4));

  // direction set: low-discrepancy plus ladders of angles collapsing onto the
  // coordinate axes; the feasible region can be extremely anisotropic around
  // the critical directions
  std::vector<Point> directions;
  for (int di = 0; di < n_dirs; ++di) {
    Point dir(dim);
    double nn = 0.0;
    for (size_t d = 0; d < dim; ++d) {
      dir[d] = 2.0 * halton(di + 1, kBases[d]) - 1.0;
      nn += dir[d] * dir[d];
    }
    if (nn < 1e-20) continue;
    double inv = 1.0 / std::sqrt(nn);
    for (auto& v : dir) v *= inv;
    directions.push_back(std::move(dir));
  }
  for (size_t i = 0; i < dim; ++i) {
    for (double si : {1.0, -1.0}) {
      Point axis(dim, 0.0);
      axis[i] = si;
      directions.push_back(axis);
      for (size_t j = 0; j < dim; ++j) {
        if (j == i) continue;
        for (double sj : {1.0, -1.0}) {
          for (int e = 1; e <= 27; ++e) {
            double ang = std::pow(10.0, -9.0 + e * 0.35);
            if (ang > 0.5) break;
            Point d(dim, 0.0);
            d[i] = si * std::cos(ang);
            d[j] = sj * std::sin(ang);
            directions.push_back(std::move(d));
          }
        }
      }
    }
  }

  std::vector<double> levels(a_grid);
  std::sort(levels.begin(), levels.end());
  std::vector<std::pair<double, double>> stair;  // (a, estimate)

  for (double a : levels) {
    if (!(a > 0.0)) continue;
    double best = -1.0;

    // boundary-biased: walk from each anchor until residual reaches a or the
    // ball caps the step (residual is convex along the ray)
    for (const auto& anchor : anchors) {
      for (const auto& dir : directions) {
        // largest step keeping ||anchor + t dir|| <= r
        double ad = 0.0, aa = 0.0;
        for (size_t d = 0; d < dim; ++d) {
          ad += anchor[d] * dir[d];
          aa += anchor[d] * anchor[d];
        }
        double disc = ad * ad - (aa - r * r);
        if (disc <= 0.0) continue;
        double t_ball = -ad + std::sqrt(disc);
        if (!(t_ball > 0.0)) continue;

        auto point_at = [&](double t) {
          Point y = anchor;
          for (size_t d = 0; d < dim; ++d) y[d] += t * dir[d];
          return y;
        };
        double t_hi = t_ball;
        Point y_hi = point_at(t_hi);
        double t_star;
        if (res_at(y_hi) <= a) {
          t_star = t_hi;  // whole ray segment feasible
        } else {
          double lo = 0.0, hi = t_hi;
          for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            if (res_at(point_at(mid)) <= a) lo = mid; else hi = mid;
          }
          t_star = lo;
        }
        Point y = point_at(t_star);
        if (res_at(y) <= a && operators::norm(y) <= r + 1e-9) {
          best = std::max(best, operators::distance_to(intersection, y));
        }
      }
    }

    // low-discrepancy ball samples with plain rejection
    for (int i = 1; i <= n_ball; ++i) {
      Point y(dim);
      double nn = 0.0;
      for (size_t d = 0; d < dim; ++d) {
        y[d] = r * (2.0 * halton(i, kBases[d]) - 1.0);
        nn += y[d] * y[d];
      }
      if (nn > r * r) continue;
      if (res_at(y) <= a) {
        best = std::max(best, operators::distance_to(intersection, y));
      }
    }

    if (best >= 0.0) stair.emplace_back(a, best);
  }

  if (stair.empty()) {
    throw std::runtime_error("estimate_empirical_psi: no feasible samples at any level");
  }
  // enforce the nondecreasing staircase by a running max
  for (size_t i = 1; i < stair.size(); ++i) {
    stair[i].second = std::max(stair[i].second, stair[i - 1].second);
  }

  regvar::RegFunc out;
  auto table = std::make_shared<std::vector<std::pair<double, double>>>(std::move(stair));
  out.eval = [table](double t) {
    if (t < table->front().first) return 0.0;
    auto it = std::upper_bound(table->begin(), table->end(), t,
                               [](double key, const std::pair<double, double>& e) {
                                 return key < e.first;
                               });
    return std::prev(it)->second;
  };
  out.domain_lo = 0.0;
  out.domain_hi = table->back().first;
  out.monotone = regvar::Monotone::nondecreasing;
  out.at = regvar::Endpoint::zero;
  return out;
}

}  // namespace karamata::solver
