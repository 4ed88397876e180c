#include "karamata/regvar.hpp"

#include <algorithm>
#include <cmath>

namespace karamata::regvar {

namespace {

bool usable(double v) { return std::isfinite(v) && v > 0.0; }

// least squares y = a + b*x, returns {a, b, rms}
struct LineFit {
  double a, b, rms;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  double b = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  double a = (sy - b * sx) / n;
  double ss = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (a + b * xs[i]);
    ss += r * r;
  }
  return {a, b, std::sqrt(ss / n)};
}

}  // namespace

std::vector<double> geometric_grid(double a, int j_max) {
  std::vector<double> g;
  g.reserve(j_max + 1);
  double t = a;
  for (int j = 0; j <= j_max; ++j) {
    if (t < 1e-300) break;
    g.push_back(t);
    t *= 0.5;
  }
  return g;
}

RVIndex estimate_rv0_index(const RegFunc& f, const std::vector<double>& lambdas,
                           const std::vector<double>& t_grid) {
  if (f.at != Endpoint::zero) {
    throw std::invalid_argument("estimate_rv0_index: function must vary at zero");
  }
  for (double l : lambdas) {
    if (!(l > 0.0) || l == 1.0) {
      throw std::invalid_argument("estimate_rv0_index: lambdas must be positive and != 1");
    }
  }

  // per-(t, lambda) ratio slopes, kept with 1/|ln t| for endpoint extrapolation
  struct Sample {
    double inv_log;  // 1/|ln t|
    double slope;
    double lambda;
  };
  std::vector<Sample> samples;
  for (double t : t_grid) {
    if (!(t > 0.0)) continue;
    for (double lam : lambdas) {
      double tl = lam * t;
      if (tl > f.domain_hi || tl < f.domain_lo || t < f.domain_lo) continue;
      double ft = f(t), ftl = f(tl);
      if (!usable(ft) || !usable(ftl)) continue;
      double slope = (std::log(ftl) - std::log(ft)) / std::log(lam);
      if (!std::isfinite(slope)) continue;
      samples.push_back({1.0 / std::max(1.0, std::abs(std::log(t))), slope, lam});
    }
  }
  size_t per_lambda_min = 4;
  if (samples.size() < per_lambda_min * std::max<size_t>(1, lambdas.size())) {
    throw std::runtime_error("estimate_rv0_index: fewer than 4 usable grid points");
  }

  // rapid-variation escape: slope magnitude past 50 and still growing
  for (double lam : lambdas) {
    std::vector<double> s;
    for (const auto& smp : samples) {
      if (smp.lambda == lam) s.push_back(smp.slope);
    }
    if (s.size() >= 5) {
      size_t n = s.size();
      bool big = std::abs(s[n - 1]) > 50.0;
      bool growing = true;
      for (size_t i = n - 5; i + 1 < n; ++i) {
        if (std::abs(s[i + 1]) < std::abs(s[i])) growing = false;
      }
      if (big && growing) {
        RVIndex r;
        r.value = s[n - 1] > 0 ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
        r.confidence = 0.0;
        return r;
      }
    }
  }

  // fit slope against 1/|ln t| over the tail; intercept estimates the limit
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) { return a.inv_log < b.inv_log; });
  size_t tail = std::min(samples.size(), 10 * std::max<size_t>(1, lambdas.size()));
  std::vector<double> xs, ys;
  for (size_t i = 0; i < tail; ++i) {
    xs.push_back(samples[i].inv_log);
    ys.push_back(samples[i].slope);
  }
  LineFit lf = fit_line(xs, ys);
  return {lf.a, lf.rms};
}

double minus_inverse(const RegFunc& f, double y) {
  if (f.at != Endpoint::zero) {
    throw std::invalid_argument("minus_inverse: function must vanish at zero");
  }
  if (!(y > 0.0)) throw std::domain_error("minus_inverse: y must be positive");

  double hi = f.domain_hi;
  double lo = std::max(f.domain_lo, 1e-307);
  if (!(hi > lo)) throw std::invalid_argument("minus_inverse: empty domain");

  if (f.monotone != Monotone::nonincreasing) {
    double fhi = f(hi);
    if (std::isfinite(fhi) && fhi < y) return hi;  // whole domain qualifies
    if (f(lo) >= y) return 0.0;                    // nothing qualifies
    // ln-domain bisection toward the upper crossing
    double llo = std::log(lo), lhi = std::log(hi);
    for (int it = 0; it < 130 && lhi - llo > 1e-15; ++it) {
      double mid = 0.5 * (llo + lhi);
      if (f(std::exp(mid)) < y) llo = mid; else lhi = mid;
    }
    return std::exp(llo);
  }

  // non-monotone safety net: running-max envelope on a mixed grid, then a
  // local refinement of the crossing cell
  const int n = 4000;
  double llo = std::log(lo), lhi = std::log(hi);
  std::vector<double> xs;
  xs.reserve(2 * n + 2);
  for (int i = 0; i <= n; ++i) xs.push_back(std::exp(llo + (lhi - llo) * i / n));
  for (int i = 1; i <= n; ++i) xs.push_back(lo + (hi - lo) * i / n);
  std::sort(xs.begin(), xs.end());
  double run_max = -std::numeric_limits<double>::infinity();
  double sup = 0.0, cell_lo = 0.0, cell_hi = 0.0, base = 0.0;
  for (double x : xs) {
    double prev_run = run_max;
    run_max = std::max(run_max, f(x));
    if (run_max < y) {
      sup = x;
    } else if (prev_run < y && cell_hi == 0.0) {
      cell_lo = sup;
      cell_hi = x;
      base = prev_run;
    }
  }
  if (cell_hi > cell_lo) {
    double run = base;
    const int m = 2000;
    for (int i = 1; i <= m; ++i) {
      double x = cell_lo + (cell_hi - cell_lo) * i / m;
      run = std::max(run, f(x));
      if (run < y) sup = x; else break;
    }
  }
  return sup;
}

double arrow_inverse(const RegFunc& f, double y) {
  if (f.at != Endpoint::infinity) {
    throw std::invalid_argument("arrow_inverse: function must diverge at infinity");
  }
  double lo = f.domain_lo;
  if (f(lo) > y) return lo;  // inf attained at the domain edge
  double hi = std::max(lo * 2.0, lo + 1.0);
  int guard = 0;
  while (f(hi) <= y) {
    hi *= 2.0;
    if (++guard > 2100) throw std::runtime_error("arrow_inverse: no crossing found");
  }
  // bisection toward the lower crossing
  double a = lo, b = hi;
  for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
    double mid = 0.5 * (a + b);
    if (f(mid) > y) b = mid; else a = mid;
  }
  return b;
}

PotterReport check_potter(const RegFunc& f, double rho, double A, double eps,
                          const std::vector<std::pair<double, double>>& grid) {
  if (!(A > 1.0) || !(eps > 0.0)) {
    throw std::invalid_argument("check_potter: need A > 1 and eps > 0");
  }
  auto pair_ok = [&](double x, double y) {
    double r = x / y;
    double rhs = A * std::max(std::pow(r, rho - eps), std::pow(r, rho + eps));
    return f(x) / f(y) <= rhs;
  };

  // candidate thresholds from the grid values
  std::vector<double> vals;
  for (const auto& [x, y] : grid) {
    vals.push_back(x);
    vals.push_back(y);
  }
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

  const bool at_zero = (f.at == Endpoint::zero);
  PotterReport best;
  // at infinity: pairs with min >= M; at zero: pairs with max <= M
  auto beyond = [&](const std::pair<double, double>& p, double M) {
    return at_zero ? std::max(p.first, p.second) <= M
                   : std::min(p.first, p.second) >= M;
  };
  auto count_beyond = [&](double M) {
    size_t n = 0;
    for (const auto& p : grid) n += beyond(p, M) ? 1 : 0;
    return n;
  };
  // a threshold only counts when it keeps a substantial share of the pairs;
  // a vacuous tail is not evidence
  const size_t min_pairs = std::max<size_t>(3, grid.size() / 4);
  // scan thresholds from the permissive end toward the strict end
  std::vector<double> thresholds = vals;
  if (at_zero) std::reverse(thresholds.begin(), thresholds.end());
  for (double M : thresholds) {
    if (count_beyond(M) < min_pairs) continue;
    bool ok = true;
    for (const auto& p : grid) {
      if (beyond(p, M) && !pair_ok(p.first, p.second)) { ok = false; break; }
    }
    if (ok) {
      best.holds_somewhere = true;
      best.threshold = M;
      break;
    }
  }
  double M = best.threshold;
  if (!best.holds_somewhere) {
    // report violations against the strictest admissible threshold
    M = at_zero ? vals.front() : vals.back();
    for (double cand : thresholds) {
      if (count_beyond(cand) >= min_pairs) M = cand;
    }
  }
  for (const auto& p : grid) {
    if (beyond(p, M) && !pair_ok(p.first, p.second)) {
      double r = p.first / p.second;
      double rhs = A * std::max(std::pow(r, rho - eps), std::pow(r, rho + eps));
      best.violations.push_back({p.first, p.second, f(p.first) / f(p.second), rhs});
    }
  }
  return best;
}

double karamata_ratio(const RegFunc& f, double sigma, double x,
                      numerics::Tolerance tol) {
  if (f.at != Endpoint::infinity) {
    throw std::invalid_argument("karamata_ratio: function must vary at infinity");
  }
  if (!(x > f.domain_lo)) {
    throw std::invalid_argument("karamata_ratio: x must exceed domain_lo");
  }
  auto integrand = [&](double t) { return std::pow(t, sigma) * f(t); };
  double denom = numerics::integrate(integrand, {f.domain_lo, x}, tol);
  return std::pow(x, sigma + 1.0) * f(x) / denom;
}

RVIndex index_calculus(IndexOp op, RVIndex rho1, RVIndex rho2, double alpha) {
  double a = rho1.value, b = rho2.value;
  double conf = std::max(rho1.confidence, rho2.confidence);
  auto bad = []() -> RVIndex {
    throw std::invalid_argument("index_calculus: indeterminate combination");
  };
  switch (op) {
    case IndexOp::product: {
      if (std::isinf(a) && std::isinf(b) && (a > 0) != (b > 0)) return bad();
      return {a + b, conf};
    }
    case IndexOp::sum:
      return {std::min(a, b), conf};
    case IndexOp::power: {
      if (std::isinf(a) && alpha == 0.0) return bad();
      return {alpha * a, conf};
    }
    case IndexOp::compose: {
      if ((std::isinf(a) && b == 0.0) || (std::isinf(b) && a == 0.0)) return bad();
      return {a * b, conf};
    }
  }
  return bad();
}

AsymptoticEquiv check_asymptotic_equiv(const RegFunc& f, const RegFunc& g,
                                       const std::vector<double>& grid) {
  std::vector<double> ts, ratios;
  for (double t : grid) {
    double fv = f(t), gv = g(t);
    if (!usable(fv) || !usable(gv)) continue;
    ts.push_back(t);
    ratios.push_back(fv / gv);
  }
  AsymptoticEquiv out;
  if (ratios.size() < 3) {
    throw std::runtime_error("check_asymptotic_equiv: too few usable grid points");
  }
  // grid is ordered toward the endpoint; compare head and tail for escape
  size_t n = ratios.size();
  double head = ratios[n / 4];
  double tail = ratios[n - 1];
  if (tail / std::max(head, 1e-300) > 50.0) {
    out.divergent = true;
    out.mu_hat = std::numeric_limits<double>::infinity();
    return out;
  }
  if (head / std::max(tail, 1e-300) > 50.0) {
    out.vanishing = true;
    out.mu_hat = 0.0;
    return out;
  }

  // extrapolate the ratio against 1/|ln t| and take the intercept
  std::vector<double> xs;
  for (double t : ts) {
    double l = (f.at == Endpoint::zero) ? std::abs(std::log(t)) : std::abs(std::log(std::max(t, 1.0 + 1e-12)));
    xs.push_back(1.0 / std::max(1.0, l));
  }
  // keep the endpoint-most half
  size_t keep = std::max<size_t>(3, n / 2);
  std::vector<double> xs2(xs.end() - keep, xs.end());
  std::vector<double> ys2(ratios.end() - keep, ratios.end());
  LineFit lf = fit_line(xs2, ys2);
  out.mu_hat = lf.a;
  double worst = 0.0;
  for (size_t i = n - keep; i < n; ++i) {
    worst = std::max(worst, std::abs(ratios[i] / out.mu_hat - 1.0));
  }
  out.residual = worst;
  return out;
}

}  // namespace karamata::regvar
