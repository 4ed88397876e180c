#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "karamata/numerics.hpp"

namespace karamata::regvar {

enum class Monotone { nondecreasing, nonincreasing, unknown };
enum class Endpoint { zero, infinity };

// A positive real function on an interval with the metadata the rate
// machinery needs: where regular variation is asserted, monotonicity, and an
// optional index known by construction.
struct RegFunc {
  std::function<double(double)> eval;
  double domain_lo = 0.0;
  double domain_hi = std::numeric_limits<double>::infinity();
  Monotone monotone = Monotone::unknown;
  Endpoint at = Endpoint::zero;
  std::optional<double> index_hint;

  double operator()(double t) const { return eval(t); }
};

struct RVIndex {
  double value = 0.0;  // may be +-infinity for rapid variation
  double confidence = 0.0;  // fit residual; smaller is better
  bool rapid() const { return std::isinf(value); }
};

// Ratio-slope estimate of the variation index of f at zero, extrapolated to
// the endpoint. Declares +-infinity when the per-lambda slopes escape.
RVIndex estimate_rv0_index(const RegFunc& f, const std::vector<double>& lambdas,
                           const std::vector<double>& t_grid);

// Convenience grid t_j = a * 2^-j, j = 0..j_max, truncated at underflow.
std::vector<double> geometric_grid(double a, int j_max = 60);

// sup { x in (0, domain_hi] : f(x) < y } for f vanishing at 0.
// Returns 0 when no x qualifies.
double minus_inverse(const RegFunc& f, double y);

// inf { x >= domain_lo : f(x) > y } for f diverging at infinity.
double arrow_inverse(const RegFunc& f, double y);

struct PotterViolation {
  double x, y;
  double lhs, rhs;
};

struct PotterReport {
  bool holds_somewhere = false;
  double threshold = 0.0;  // pairs beyond/below it satisfy the bound
  std::vector<PotterViolation> violations;  // against the best threshold
};

// Checks f(x)/f(y) <= A * max((x/y)^(rho-eps), (x/y)^(rho+eps)) over the grid
// pairs, looking for a threshold past which it always holds.
PotterReport check_potter(const RegFunc& f, double rho, double A, double eps,
                          const std::vector<std::pair<double, double>>& grid);

// x^(sigma+1) f(x) / integral_{domain_lo}^{x} t^sigma f(t) dt; tends to
// sigma + 1 + rho for f varying with index rho at infinity.
double karamata_ratio(const RegFunc& f, double sigma, double x,
                      numerics::Tolerance tol = {});

enum class IndexOp { product, sum, power, compose };

// Index calculus at zero: product adds, sum takes the min, power scales,
// composition multiplies.
RVIndex index_calculus(IndexOp op, RVIndex rho1, RVIndex rho2, double alpha = 1.0);

struct AsymptoticEquiv {
  double mu_hat = 0.0;
  double residual = 0.0;
  bool divergent = false;  // ratio escaping to infinity
  bool vanishing = false;  // ratio collapsing to zero
};

// Fits the limit constant of f/g at the relevant endpoint over the grid tail.
AsymptoticEquiv check_asymptotic_equiv(const RegFunc& f, const RegFunc& g,
                                       const std::vector<double>& grid);

}  // namespace karamata::regvar
