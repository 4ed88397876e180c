#include <cmath>
#include <random>

#include "doctest.h"
#include "karamata/numerics.hpp"

using namespace karamata::numerics;

namespace {

// independent bisection oracle for monotone roots
double bisect_root(const std::function<double(double)>& f, double target,
                   double lo, double hi, bool increasing) {
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    bool below = increasing ? f(mid) < target : f(mid) > target;
    if (below) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("lambert_w0 spot values") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  // bisection oracle on w*e^w - 1 over [0,1]
  double oracle = bisect_root([](double w) { return w * std::exp(w); }, 1.0, 0.0, 1.0, true);
  CHECK(oracle == doctest::Approx(0.5671432904097838).epsilon(1e-14));
  CHECK(lambert_w0(1.0) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK_THROWS_AS(lambert_w0(-0.4), std::domain_error);
}

TEST_CASE("lambert_wm1 spot values") {
  CHECK(lambert_wm1(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-7));
  double oracle = bisect_root([](double w) { return w * std::exp(w); }, -0.1, -10.0, -1.0, false);
  CHECK(oracle == doctest::Approx(-3.5771520639572971).epsilon(1e-13));
  CHECK(lambert_wm1(-0.1) == doctest::Approx(oracle).epsilon(1e-13));
  double w = lambert_wm1(-1e-8);
  CHECK(std::abs(w * std::exp(w) + 1e-8) <= 1e-20);
  CHECK_THROWS_AS(lambert_wm1(0.0), std::domain_error);
  CHECK_THROWS_AS(lambert_wm1(0.5), std::domain_error);
  CHECK_THROWS_AS(lambert_wm1(-0.4), std::domain_error);
}

TEST_CASE("lambert identity sweeps") {
  double worst0 = 0.0;
  for (int i = 0; i < 2000; ++i) {
    double x = -std::exp(-1.0) + 1e-9 + (1e6 + 0.3) * i / 1999.0;
    double w = lambert_w0(x);
    CHECK(w >= -1.0);
    worst0 = std::max(worst0, std::abs(w * std::exp(w) - x) / std::max(1.0, std::abs(x)));
  }
  CHECK(worst0 <= 1e-12);

  double worst1 = 0.0;
  bool monotone = true;
  double prev = 0.0;
  for (int i = 0; i < 2000; ++i) {
    double lg = std::log(1e-12) + (std::log(std::exp(-1.0) - 1e-12) - std::log(1e-12)) * i / 1999.0;
    double x = -std::exp(lg);
    double w = lambert_wm1(x);
    CHECK(w <= -1.0);
    if (i > 0 && w <= prev) monotone = false;  // decreasing in x => increasing as x -> -1/e
    prev = w;
    worst1 = std::max(worst1, std::abs(w * std::exp(w) - x) / std::abs(x));
  }
  CHECK(worst1 <= 1e-12);
  CHECK(monotone);
  // branch consistency; square-root conditioning at the branch point
  CHECK(lambert_w0(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-7));
}

TEST_CASE("integrate closed forms") {
  CHECK(integrate([](double t) { return 1.0 / t; }, {0.5, 1.0}) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-10));
  CHECK(integrate([](double t) { return t; }, {0.0, 1.0}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // endpoint-singularity refinement
  CHECK(integrate([](double t) { return 1.0 / std::sqrt(t); }, {1e-6, 1.0}) ==
        doctest::Approx(2.0 * (1.0 - 1e-3)).epsilon(1e-8));
}

TEST_CASE("integrate endpoint blow-up") {
  // f(lo) infinite but integrable
  double v = integrate([](double t) { return 1.0 / std::sqrt(t); }, {0.0, 1.0});
  CHECK(v == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("invert_monotone examples") {
  CHECK(invert_monotone([](double x) { return x * x * x; }, 8.0, {0.0, 3.0}) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK(invert_monotone([](double x) { return std::exp(x); }, 1.0, {-1.0, 1.0}) ==
        doctest::Approx(0.0).epsilon(1e-10));
  // fine-grid + bisection oracle; the target is the entropic pair evaluated at 0.1
  auto f = [](double x) { return -std::sqrt(x) * std::log(x); };
  double oracle = bisect_root(f, 0.1, 1e-12, 0.013479507251343897, true);
  CHECK(oracle == doctest::Approx(1.2347021846031254e-4).epsilon(1e-12));
  CHECK(invert_monotone(f, 0.1, {1e-12, 0.013479507251343897}) ==
        doctest::Approx(oracle).epsilon(1e-9));

  CHECK_THROWS_AS(invert_monotone([](double x) { return x; }, 5.0, {0.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(invert_monotone([](double) { return 1.0; }, 1.0, {0.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("invert_monotone round trip on random monotone functions") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> U(0.2, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    double a = U(rng), b = U(rng), c = U(rng);
    auto f = [a, b, c](double x) { return a * x + b * std::pow(x, c) + std::sin(0.3 * x) * 0.1 * a; };
    double x_true = 0.1 + 2.8 * (trial / 50.0);
    double y = f(x_true);
    double x = invert_monotone(f, y, {0.0, 3.5});
    CHECK(std::abs(f(x) - y) <= 1e-10 + 1e-10 * std::abs(y));
  }
}

TEST_CASE("bracket validation") {
  CHECK_THROWS_AS(Bracket(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Bracket(2.0, 1.0), std::invalid_argument);
}
