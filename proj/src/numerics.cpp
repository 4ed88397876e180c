#include "karamata/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace karamata::numerics {

namespace {

constexpr double kInvE = 0.36787944117144233;  // exp(-1)

// Residual of w*exp(w) = x, computed in log form when exp(w) would overflow.
double wexpw_residual(double w, double x) {
  if (w > 700.0) {
    // log-form comparison; both sides positive here
    return std::log(w) + w - std::log(x);
  }
  return w * std::exp(w) - x;
}

}  // namespace

Bracket::Bracket(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!(std::isfinite(lo) && std::isfinite(hi)) || !(lo < hi)) {
    throw std::invalid_argument("Bracket requires finite lo < hi");
  }
}

double lambert_w0(double x) {
  if (std::isnan(x)) throw std::domain_error("lambert_w0: nan input");
  if (x < -kInvE) {
    // 1-ulp-scale slack at the branch point
    if (x > -kInvE - 4e-16) return -1.0;
    throw std::domain_error("lambert_w0: x < -1/e");
  }
  if (x == 0.0) return 0.0;
  if (x == -kInvE) return -1.0;

  // initial guess
  double w;
  if (x < -0.25) {
    double p = std::sqrt(2.0 * (std::exp(1.0) * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (x < 2.0) {
    w = x / (1.0 + x);
  } else {
    double l = std::log(x);
    double ll = std::log(l);
    w = l - ll + ll / l;
  }
  if (w < -1.0) w = -1.0 + 1e-12;

  // bisection bracket on the increasing residual, Halley steps inside it
  double lo = -1.0;
  double hi = std::max({1.0, w * 2.0, std::log(std::max(x, 1e-300)) + 2.0});
  while (wexpw_residual(hi, x) < 0.0) hi *= 2.0;

  const double tol = 1e-15 * std::max(1.0, std::abs(x));
  for (int it = 0; it < 200; ++it) {
    double f = wexpw_residual(w, x);
    if (std::abs(f) <= tol) return w;
    if (f > 0.0) hi = std::min(hi, w); else lo = std::max(lo, w);
    double step;
    if (w <= 700.0) {
      double ew = std::exp(w);
      double fv = w * ew - x;
      double d1 = ew * (1.0 + w);
      double denom = d1 - (w + 2.0) * fv / (2.0 * w + 2.0);
      step = (denom != 0.0 && std::isfinite(denom)) ? fv / denom : 0.0;
    } else {
      // log-form Newton
      double fv = std::log(w) + w - std::log(x);
      step = fv / (1.0 / w + 1.0);
    }
    double cand = w - step;
    if (!(cand > lo && cand < hi) || !std::isfinite(cand)) cand = 0.5 * (lo + hi);
    if (cand == w) cand = 0.5 * (lo + hi);
    w = cand;
    if (hi - lo <= 4.0 * std::abs(w) * std::numeric_limits<double>::epsilon()) {
      return w;
    }
  }
  return w;
}

double lambert_wm1(double x) {
  if (std::isnan(x)) throw std::domain_error("lambert_wm1: nan input");
  if (x >= 0.0) throw std::domain_error("lambert_wm1: x must be negative");
  if (x < -kInvE) {
    if (x > -kInvE - 4e-16) return -1.0;
    throw std::domain_error("lambert_wm1: x < -1/e");
  }
  if (x == -kInvE) return -1.0;

  double w;
  if (x < -0.27) {
    double p = -std::sqrt(2.0 * (std::exp(1.0) * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else {
    double l = std::log(-x);
    double ll = std::log(-l);
    w = l - ll;  // l - log(-l); valid since -x < 0.27 gives l < -1
  }
  if (w > -1.0) w = -1.0 - 1e-12;

  // residual w*exp(w) - x is decreasing on (-inf, -1]
  double hi = -1.0;           // residual(hi) <= 0
  double lo = std::min(w * 2.0, -2.0);
  while (lo * std::exp(lo) - x < 0.0) lo *= 2.0;

  const double tol = 1e-15 * std::max(std::abs(x), 1e-300);
  for (int it = 0; it < 200; ++it) {
    double ew = std::exp(w);
    double f = w * ew - x;
    if (std::abs(f) <= tol) return w;
    if (f > 0.0) lo = std::max(lo, w); else hi = std::min(hi, w);
    double d1 = ew * (1.0 + w);
    double denom = d1 - (w + 2.0) * f / (2.0 * w + 2.0);
    double cand = (denom != 0.0 && std::isfinite(denom)) ? w - f / denom : 0.5 * (lo + hi);
    if (!(cand > lo && cand < hi) || !std::isfinite(cand)) cand = 0.5 * (lo + hi);
    if (cand == w) cand = 0.5 * (lo + hi);
    w = cand;
    if (hi - lo <= 4.0 * std::abs(w) * std::numeric_limits<double>::epsilon()) {
      return w;
    }
  }
  return w;
}

namespace {

struct QuadState {
  const std::function<double(double)>& f;
  double abs_tol;
  double rel_tol;
  int max_depth;
  long evals = 0;
  long eval_budget = 20'000'000;
  bool budget_hit = false;

  double eval(double t) {
    ++evals;
    if (evals > eval_budget) budget_hit = true;
    return f(t);
  }
};

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(QuadState& st, double a, double fa, double b, double fb,
             double fm, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = st.eval(lm);
  double frm = st.eval(rm);
  double left = simpson(fa, flm, fm, m - a);
  double right = simpson(fm, frm, fb, b - m);
  double delta = left + right - whole;
  if (depth >= st.max_depth || st.budget_hit) {
    st.budget_hit = true;
    return left + right + delta / 15.0;
  }
  if (std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adapt(st, a, fa, m, fm, flm, left, 0.5 * tol, depth + 1) +
         adapt(st, m, fm, b, fb, frm, right, 0.5 * tol, depth + 1);
}

double integrate_panel(QuadState& st, double a, double b) {
  double fa = st.eval(a);
  double m = 0.5 * (a + b);
  double fm = st.eval(m);
  double fb = st.eval(b);
  if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb)) {
    throw std::domain_error("integrate: non-finite integrand inside panel");
  }
  double whole = simpson(fa, fm, fb, b - a);
  double tol = st.abs_tol + st.rel_tol * std::abs(whole);
  return adapt(st, a, fa, b, fb, fm, whole, tol, 0);
}

}  // namespace

double integrate(const std::function<double(double)>& f, Bracket b,
                 Tolerance tol) {
  QuadState st{f, tol.abs_tol, tol.rel_tol, std::max(10, tol.max_iter)};

  double fa = f(b.lo);
  if (std::isfinite(fa)) {
    double r = integrate_panel(st, b.lo, b.hi);
    if (st.budget_hit) throw accuracy_error("integrate: subdivision budget exhausted", r);
    return r;
  }

  // blow-up at the left endpoint: geometric ladder toward it
  double h = b.hi - b.lo;
  double total = 0.0;
  double right = b.hi;
  for (int j = 1; j <= 1100; ++j) {
    double left = b.lo + h * std::ldexp(1.0, -j);
    if (!(left < right)) break;
    double piece = integrate_panel(st, left, right);
    total += piece;
    right = left;
    if (std::abs(piece) <= 0.25 * (tol.abs_tol + tol.rel_tol * std::abs(total)) && j > 8) {
      if (st.budget_hit) throw accuracy_error("integrate: subdivision budget exhausted", total);
      return total;
    }
  }
  throw accuracy_error("integrate: endpoint singularity did not converge", total);
}

double invert_monotone(const std::function<double(double)>& f, double y,
                       Bracket b, Tolerance tol) {
  double lo = b.lo, hi = b.hi;
  double flo = f(lo), fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi)) {
    throw std::domain_error("invert_monotone: non-finite endpoint values");
  }
  if (flo == fhi) {
    throw std::invalid_argument("invert_monotone: flat function on bracket");
  }
  bool increasing = fhi > flo;
  double ymin = std::min(flo, fhi), ymax = std::max(flo, fhi);
  if (y < ymin || y > ymax) {
    throw std::invalid_argument("invert_monotone: target outside range on bracket");
  }

  auto g = [&](double x) { return increasing ? f(x) - y : y - f(x); };
  double glo = increasing ? flo - y : y - flo;
  double ghi = increasing ? fhi - y : y - fhi;
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;

  const double resid_tol = tol.abs_tol + tol.rel_tol * std::abs(y);
  double x = 0.5 * (lo + hi);
  double best = x, best_resid = std::numeric_limits<double>::infinity();
  for (int it = 0; it < std::max(60, tol.max_iter); ++it) {
    double gx = g(x);
    double resid = std::abs(gx);
    if (resid < best_resid) { best = x; best_resid = resid; }
    if (resid <= resid_tol) return x;
    if (gx > 0.0) { hi = x; ghi = gx; } else { lo = x; glo = gx; }
    double width = hi - lo;
    if (width <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
      return best;
    }
    // secant on odd iterations, bisection otherwise
    double cand;
    if ((it & 1) && ghi != glo) {
      cand = lo + (hi - lo) * (-glo) / (ghi - glo);
      if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    } else {
      cand = 0.5 * (lo + hi);
    }
    x = cand;
  }
  throw accuracy_error("invert_monotone: iteration budget exhausted", best);
}

}  // namespace karamata::numerics
