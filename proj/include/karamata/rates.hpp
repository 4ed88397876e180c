#pragma once

#include <memory>
#include <string>
#include <vector>

#include "karamata/regvar.hpp"

namespace karamata::rates {

// Ingredients of the squared-residual transfer function:
// phi(u) = psi_B(sqrt(c*u))^2 with c = 2*alpha*(1+4*nu*s)/(nu*(1-alpha)),
// restricted to (0, a_hat].
struct PhiSpec {
  regvar::RegFunc psi_B;
  double alpha = 0.5;
  double nu = 1.0;
  int s = 1;
  double a_hat = 1.0;
  double delta = 0.0;  // <= 0 selects the default min(a_hat, phi(a_hat))
};

double phi_factor(const PhiSpec& spec);
regvar::RegFunc build_phi(const PhiSpec& spec);

struct underflow_error : std::runtime_error {
  double bracket_lo, bracket_hi;
  underflow_error(const std::string& msg, double lo, double hi)
      : std::runtime_error(msg), bracket_lo(lo), bracket_hi(hi) {}
};

// Cached evaluator of the decreasing integral u -> int_u^delta dt/phi^-(t)
// and its inverse. Values are accumulated on a log-spaced anchor table so
// repeated queries stay cheap.
class PhiBig {
 public:
  PhiBig(regvar::RegFunc phi, double delta);

  double value(double u) const;
  double inverse(double y) const;  // throws underflow_error below 1e-300
  double delta() const { return delta_; }

 private:
  double panel(double a, double b) const;
  void extend_down(double target) const;

  regvar::RegFunc phi_;
  double delta_;
  // anchors sorted by descending u; anchor.second = value(u)
  mutable std::vector<std::pair<double, double>> anchors_;
};

double phi_big(const regvar::RegFunc& phi, double delta, double u);
double invert_phi_big(const regvar::RegFunc& phi, double delta, double y);

// Distance bound k -> sqrt(Phi^-1(Phi(d0_sq) + floor(k/s))).
class RateBound {
 public:
  RateBound(PhiSpec spec, double d0_sq);

  double at(long k) const;
  double squared_at(long k) const;
  int window() const { return spec_.s; }
  double phi_of_d0() const { return phi_d0_; }
  const PhiBig& integral() const { return *big_; }

 private:
  PhiSpec spec_;
  double d0_sq_;
  std::shared_ptr<PhiBig> big_;
  double phi_d0_;
};

double rate_bound(const PhiSpec& spec, double d0_sq, long k);

enum class Regime { linear, almost_linear, sublinear, sub_polynomial };

std::string regime_name(Regime r);

struct RateClass {
  Regime regime;
  // index of the inverse integral (rho/(rho-1)) when sublinear
  double inverse_index = 0.0;
  // sup of valid o(k^-r) exponents for the distance bound when sublinear
  double distance_exponent_sup = 0.0;
};

RateClass classify_rate(regvar::RVIndex rho, bool linear_floor);

// 1 / (s * phi^-(1/s)); the shortcut function behind the tighter asymptotics.
double g_function(const regvar::RegFunc& phi, double s);

// Power-shifted variant s^alpha * g(s) used by the slowly varying case.
double g_hat(const regvar::RegFunc& phi, double s, double alpha = 1.0);

struct RateProfile {
  std::string name;
  std::function<double(double)> eval;  // positive iteration count -> value
  Regime regime;
};

RateProfile profile_holder(double gamma);
RateProfile profile_holder_entropic();
RateProfile profile_entropic_envelope(double c);
RateProfile profile_logarithmic(double gamma_log);

// Catalog dispatch: holder(param=gamma), holder_entropic,
// entropic_envelope(param=c), logarithmic(param=exponent).
RateProfile asymptotic_profile(const std::string& tag, double param = 0.0);

// psi = Theta o (sum of Gammas); index hint theta * min(rho_i) when known.
regvar::RegFunc compose_psi(const regvar::RegFunc& Theta,
                            const std::vector<regvar::RegFunc>& Gammas);

}  // namespace karamata::rates
