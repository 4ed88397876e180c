#include "karamata/rates.hpp"

#include <algorithm>
#include <cmath>

namespace karamata::rates {

namespace {
constexpr double kUnderflowFloor = 1e-300;
constexpr double kLnStep = 0.5;  // anchor spacing in ln u
}  // namespace

double phi_factor(const PhiSpec& spec) {
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
    throw std::invalid_argument("phi_factor: alpha must lie in (0,1)");
  }
  if (!(spec.nu > 0.0 && spec.nu <= 1.0)) {
    throw std::invalid_argument("phi_factor: nu must lie in (0,1]");
  }
  if (spec.s < 1) throw std::invalid_argument("phi_factor: s must be positive");
  return 2.0 * spec.alpha * (1.0 + 4.0 * spec.nu * spec.s) /
         (spec.nu * (1.0 - spec.alpha));
}

regvar::RegFunc build_phi(const PhiSpec& spec) {
  double c = phi_factor(spec);
  if (!(spec.a_hat > 0.0)) {
    throw std::invalid_argument("build_phi: a_hat must be positive");
  }
  regvar::RegFunc phi;
  auto psi = spec.psi_B;  // copy for capture
  phi.eval = [psi, c](double u) {
    double v = psi(std::sqrt(c * u));
    return v * v;
  };
  phi.domain_lo = 0.0;
  phi.domain_hi = spec.a_hat;
  phi.monotone = psi.monotone;
  phi.at = regvar::Endpoint::zero;
  if (psi.index_hint) phi.index_hint = *psi.index_hint;  // squared comp of sqrt: unchanged
  return phi;
}

PhiBig::PhiBig(regvar::RegFunc phi, double delta) : phi_(std::move(phi)), delta_(delta) {
  if (!(delta_ > 0.0)) throw std::invalid_argument("PhiBig: delta must be positive");
  anchors_.emplace_back(delta_, 0.0);
}

double PhiBig::panel(double a, double b) const {
  if (!(a < b)) return 0.0;
  // integrate in the log domain, where inverse-power integrands flatten out
  auto integrand = [this](double s) {
    double t = std::exp(s);
    double inv = regvar::minus_inverse(phi_, t);
    if (!(inv > 0.0)) {
      throw std::domain_error("PhiBig: minus inverse hit zero; integrand singular");
    }
    return t / inv;
  };
  numerics::Tolerance tol;
  tol.abs_tol = 1e-300;
  tol.rel_tol = 1e-11;
  tol.max_iter = 60;
  double la = std::log(a), lb = std::log(b);
  if (!(la < lb)) {
    // sub-ulp sliver; a trapezoid is already beyond full precision
    return (b - a) / regvar::minus_inverse(phi_, a);
  }
  return numerics::integrate(integrand, {la, lb}, tol);
}

void PhiBig::extend_down(double target) const {
  while (anchors_.back().first > target) {
    double u = anchors_.back().first;
    double next = std::max(target, u * std::exp(-kLnStep));
    if (next < kUnderflowFloor) next = kUnderflowFloor;
    double val = anchors_.back().second + panel(next, u);
    anchors_.emplace_back(next, val);
    if (next <= kUnderflowFloor) break;
  }
}

double PhiBig::value(double u) const {
  if (!(u > 0.0)) throw std::domain_error("PhiBig::value: u must be positive");
  if (u >= delta_) {
    // oriented integral: nonpositive above delta
    return -panel(delta_, u);
  }
  extend_down(u);
  // first anchor with anchor.u <= u sits after the last one above u
  auto it = std::lower_bound(
      anchors_.begin(), anchors_.end(), u,
      [](const std::pair<double, double>& a, double key) { return a.first > key; });
  // it points at the first anchor <= u; the previous one is the next larger
  if (it == anchors_.begin()) return 0.0;  // u == delta
  auto above = std::prev(it);
  return above->second + panel(u, above->first);
}

double PhiBig::inverse(double y) const {
  if (y <= 0.0) {
    // values at or above delta; bracket on [delta, 64*delta]
    double lo = delta_, hi = delta_ * 64.0;
    while (value(hi) > y) hi *= 4.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
      double mid = 0.5 * (lo + hi);
      if (value(mid) > y) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  // expand the lower bracket until the decreasing integral exceeds y
  double hi = delta_;
  double lo = anchors_.back().first;
  while (anchors_.back().second < y) {
    double next = anchors_.back().first * std::exp(-8.0);
    if (anchors_.back().first <= kUnderflowFloor) {
      throw underflow_error("invert_phi_big: bracket passed 1e-300",
                            anchors_.back().first, hi);
    }
    extend_down(std::max(next, kUnderflowFloor));
  }
  // locate bracketing anchors
  auto it = std::lower_bound(
      anchors_.begin(), anchors_.end(), y,
      [](const std::pair<double, double>& a, double key) { return a.second < key; });
  if (it == anchors_.begin()) return delta_;
  lo = it->first;
  hi = std::prev(it)->first;
  double llo = std::log(lo), lhi = std::log(hi);
  for (int k = 0; k < 120 && (lhi - llo) > 1e-13 * std::max(1.0, std::abs(llo)); ++k) {
    double mid = 0.5 * (llo + lhi);
    double v = value(std::exp(mid));
    if (v > y) llo = mid; else lhi = mid;
  }
  return std::exp(0.5 * (llo + lhi));
}

double phi_big(const regvar::RegFunc& phi, double delta, double u) {
  return PhiBig(phi, delta).value(u);
}

double invert_phi_big(const regvar::RegFunc& phi, double delta, double y) {
  return PhiBig(phi, delta).inverse(y);
}

RateBound::RateBound(PhiSpec spec, double d0_sq) : spec_(std::move(spec)), d0_sq_(d0_sq) {
  if (!(d0_sq_ > 0.0)) throw std::invalid_argument("RateBound: d0_sq must be positive");
  if (d0_sq_ >= spec_.a_hat) spec_.a_hat = 2.0 * d0_sq_;
  regvar::RegFunc phi = build_phi(spec_);
  double delta = spec_.delta;
  if (!(delta > 0.0)) delta = std::min(spec_.a_hat, phi(spec_.a_hat));
  big_ = std::make_shared<PhiBig>(phi, delta);
  phi_d0_ = big_->value(d0_sq_);
}

double RateBound::squared_at(long k) const {
  if (k < 0) throw std::invalid_argument("RateBound::at: k must be nonnegative");
  long m = k / spec_.s;
  if (m == 0) return d0_sq_;
  return big_->inverse(phi_d0_ + static_cast<double>(m));
}

double RateBound::at(long k) const { return std::sqrt(squared_at(k)); }

double rate_bound(const PhiSpec& spec, double d0_sq, long k) {
  return RateBound(spec, d0_sq).at(k);
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::linear: return "linear";
    case Regime::almost_linear: return "almost_linear";
    case Regime::sublinear: return "sublinear";
    case Regime::sub_polynomial: return "sub_polynomial";
  }
  return "unknown";
}

RateClass classify_rate(regvar::RVIndex rho, bool linear_floor) {
  double r = rho.value;
  if (!(r >= 0.0 && r <= 1.0)) {
    throw std::invalid_argument("classify_rate: index must lie in [0,1]");
  }
  if (r == 0.0) return {Regime::sub_polynomial, 0.0, 0.0};
  if (r == 1.0) {
    if (!linear_floor) {
      throw std::invalid_argument(
          "classify_rate: index 1 needs the linear floor hypothesis");
    }
    return {Regime::almost_linear, 0.0, 0.0};
  }
  RateClass c;
  c.regime = Regime::sublinear;
  c.inverse_index = r / (r - 1.0);
  c.distance_exponent_sup = -r / (2.0 * (r - 1.0));
  return c;
}

double g_function(const regvar::RegFunc& phi, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("g_function: s must be positive");
  double inv = regvar::minus_inverse(phi, 1.0 / s);
  if (!(inv > 0.0)) throw std::domain_error("g_function: minus inverse hit zero");
  return 1.0 / (s * inv);
}

double g_hat(const regvar::RegFunc& phi, double s, double alpha) {
  return std::pow(s, alpha) * g_function(phi, s);
}

RateProfile profile_holder(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("profile_holder: gamma must lie in (0,1]");
  }
  if (gamma == 1.0) {
    // geometric envelope with a unit base constant
    return {"linear", [](double k) { return std::exp(-k); }, Regime::linear};
  }
  double e = -gamma / (2.0 * (1.0 - gamma));
  return {"holder", [e](double k) { return std::pow(k, e); }, Regime::sublinear};
}

RateProfile profile_holder_entropic() {
  return {"holder_entropic",
          [](double k) {
            double s = std::sqrt(k);
            double w = numerics::lambert_w0(s);
            return w * w / s;
          },
          Regime::sublinear};
}

RateProfile profile_entropic_envelope(double c) {
  if (!(c > 1.0)) {
    throw std::invalid_argument("profile_entropic_envelope: c must exceed 1");
  }
  return {"entropic_envelope",
          [c](double k) {
            double s = std::sqrt(k);
            return s * std::exp(-s * std::log(c));
          },
          Regime::almost_linear};
}

RateProfile profile_logarithmic(double gamma_log) {
  if (!(gamma_log > 0.0)) {
    throw std::invalid_argument("profile_logarithmic: exponent must be positive");
  }
  return {"logarithmic",
          [gamma_log](double k) {
            double l = std::log(std::max(k, std::exp(1.0)));
            return std::pow(1.0 / l, gamma_log);
          },
          Regime::sub_polynomial};
}

RateProfile asymptotic_profile(const std::string& tag, double param) {
  if (tag == "holder") return profile_holder(param);
  if (tag == "holder_entropic") return profile_holder_entropic();
  if (tag == "entropic_envelope") return profile_entropic_envelope(param);
  if (tag == "logarithmic") return profile_logarithmic(param);
  throw std::invalid_argument("asymptotic_profile: unknown tag " + tag);
}

regvar::RegFunc compose_psi(const regvar::RegFunc& Theta,
                            const std::vector<regvar::RegFunc>& Gammas) {
  if (Gammas.empty()) {
    throw std::invalid_argument("compose_psi: at least one inner function required");
  }
  std::vector<regvar::RegFunc> gs = Gammas;
  regvar::RegFunc theta = Theta;
  regvar::RegFunc psi;
  psi.eval = [theta, gs](double t) {
    double s = 0.0;
    for (const auto& g : gs) s += g(t);
    return theta(s);
  };
  psi.domain_lo = 0.0;
  psi.domain_hi = Gammas.front().domain_hi;
  for (const auto& g : Gammas) psi.domain_hi = std::min(psi.domain_hi, g.domain_hi);
  psi.monotone = regvar::Monotone::nondecreasing;
  psi.at = regvar::Endpoint::zero;
  if (Theta.index_hint) {
    double min_rho = std::numeric_limits<double>::infinity();
    bool all = true;
    for (const auto& g : Gammas) {
      if (!g.index_hint) { all = false; break; }
      min_rho = std::min(min_rho, *g.index_hint);
    }
    if (all) psi.index_hint = *Theta.index_hint * min_rho;
  }
  return psi;
}

}  // namespace karamata::rates
