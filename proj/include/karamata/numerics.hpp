#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace karamata::numerics {

struct Bracket {
  double lo;
  double hi;
  Bracket(double lo_, double hi_);
};

struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_iter = 200;
};

// Thrown when an iterative routine runs out of budget; carries the best
// estimate reached so far.
struct accuracy_error : std::runtime_error {
  double best_estimate;
  accuracy_error(const std::string& msg, double best)
      : std::runtime_error(msg), best_estimate(best) {}
};

// Principal branch of the converse relation of w -> w*exp(w).
// Domain [-1/e, inf), range [-1, inf).
double lambert_w0(double x);

// Lower real branch. Domain [-1/e, 0), range (-inf, -1].
double lambert_wm1(double x);

// Adaptive quadrature of f over [b.lo, b.hi]. Integrable blow-ups at b.lo are
// handled by geometric subdivision toward the endpoint.
double integrate(const std::function<double(double)>& f, Bracket b,
                 Tolerance tol = {});

// Solves f(x) = y for continuous strictly monotone f on the bracket.
// Safeguarded secant/bisection; returns x in [b.lo, b.hi].
double invert_monotone(const std::function<double(double)>& f, double y,
                       Bracket b, Tolerance tol = {});

}  // namespace karamata::numerics
