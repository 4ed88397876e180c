#include <cmath>
#include <random>

#include <stdexcept>

#include "doctest.h"
#include "karamata/operators.hpp"

using namespace karamata;
using namespace karamata::operators;

TEST_CASE("gamma pair") {
  CHECK(gamma_fn(0.0) == 0.0);
  CHECK(gamma_half() == doctest::Approx(1.3479507251343897e-2).epsilon(1e-12));
  CHECK(gamma_half() < 1.0);
  CHECK(gamma_inv(std::exp(-2.0)) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(gamma_inv(0.0) == 0.0);
  // inverse identity on (0, gamma(0.5)]
  for (double y : {0.01, 1e-4, 1e-8, gamma_half()}) {
    CHECK(gamma_fn(gamma_inv(y)) == doctest::Approx(y).epsilon(1e-10));
  }
  CHECK(gamma_fn(0.1) == doctest::Approx(1.2347021846031254e-4).epsilon(1e-12));
  // even, increasing on [0, 0.5]
  CHECK(gamma_fn(-0.3) == gamma_fn(0.3));
  CHECK(gamma_fn(0.2) < gamma_fn(0.3));
  CHECK_THROWS_AS(gamma_fn(0.6), std::domain_error);
  CHECK_THROWS_AS(gamma_inv(0.2), std::domain_error);
  // underflow region materializes zero
  CHECK(gamma_fn(1e-200) == 0.0);
}

TEST_CASE("exp cone projection spots") {
  auto K = make_exp_cone();
  Point inside{0.0, 1.0, 3.0};
  CHECK(project(K, inside) == inside);
  // polar point maps to the apex
  Point q = project(K, {1.0, 0.0, -1.0});
  CHECK(norm(q) <= 1e-12);
}

TEST_CASE("exp cone polar identity") {
  auto K = make_exp_cone();
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int i = 0; i < 4000; ++i) {
    Point p{U(rng), U(rng), U(rng)};
    bool zero = norm(project(K, p)) <= 1e-9;
    // compare only when the membership verdict is decisive either way
    bool strictly_in = exp_cone_polar_member(p, -1e-7);
    bool loosely_in = exp_cone_polar_member(p, 1e-7);
    if (strictly_in) CHECK(zero);
    if (!loosely_in) CHECK_FALSE(zero);
  }
}

TEST_CASE("projection properties per set kind") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  std::vector<SetDescriptor> sets{
      make_exp_cone(),
      make_gamma_epigraph(),
      make_power_epigraph(2.0, 1.0),
      make_flat_epigraph(1.0),
      make_halfspace({1.0, 2.0}, 0.5),
      make_affine({0.0, 1.0}, {{1.0, 0.0}}),
      make_dr_fix_ray(),
      make_box({-1.0, 0.0}, {0.0, 2.0}),
  };
  for (const auto& set : sets) {
    size_t d = set.kind == SetKind::exp_cone ? 3 : 2;
    double worst_idem = 0.0, worst_exp = 0.0, worst_vi = 0.0;
    std::vector<Point> members;
    for (int i = 0; i < 50; ++i) {
      Point z(d);
      for (auto& v : z) v = U(rng);
      members.push_back(project(set, z));
    }
    for (int i = 0; i < 300; ++i) {
      Point p(d), p2(d);
      for (auto& v : p) v = U(rng);
      for (auto& v : p2) v = U(rng);
      Point q = project(set, p);
      Point q2 = project(set, p2);
      worst_idem = std::max(worst_idem, dist(project(set, q), q));
      worst_exp = std::max(worst_exp, dist(q, q2) - dist(p, p2));
      for (const auto& z : members) {
        double vi = 0.0;
        for (size_t j = 0; j < d; ++j) vi += (p[j] - q[j]) * (z[j] - q[j]);
        worst_vi = std::max(worst_vi, vi);
      }
    }
    CAPTURE(static_cast<int>(set.kind));
    CHECK(worst_idem <= 1e-9);
    CHECK(worst_exp <= 1e-9);
    CHECK(worst_vi <= 1e-8);
  }
}

TEST_CASE("gamma epigraph projection against a golden-section oracle") {
  auto C1 = make_gamma_epigraph();
  auto obj = [](double xbar, const Point& p) {
    double dx = xbar - p[0];
    double dy = gamma_fn(xbar) - p[1];
    return dx * dx + dy * dy;
  };
  auto golden = [&](const Point& p) {
    double a = 0.0, b = 0.5;
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = obj(x1, p), f2 = obj(x2, p);
    for (int i = 0; i < 200; ++i) {
      if (f1 < f2) { b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = obj(x1, p); }
      else { a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = obj(x2, p); }
    }
    return 0.5 * (a + b);
  };
  for (Point p : {Point{0.1, 0.0}, Point{0.3, -0.2}, Point{0.45, 0.001}}) {
    double xo = golden(p);
    Point q = project(C1, p);
    CHECK(q[0] == doctest::Approx(xo).epsilon(1e-8));
    CHECK(q[1] == doctest::Approx(gamma_fn(xo)).epsilon(1e-10));
  }
  // symmetric mirror
  Point qm = project(C1, {-0.1, 0.0});
  Point qp = project(C1, {0.1, 0.0});
  CHECK(qm[0] == doctest::Approx(-qp[0]));
  // below the apex projects to the origin exactly
  Point q0 = project(C1, {0.0, -1.0});
  CHECK(q0[0] == 0.0);
  CHECK(q0[1] == 0.0);
}

TEST_CASE("dr operator fixed ray") {
  auto p1 = projection_op(make_gamma_epigraph());
  auto p2 = projection_op(make_affine({0.0, 0.0}, {{1.0, 0.0}}));
  auto tdr = dr_operator(p2, p1, make_dr_fix_ray());
  std::vector<FixedPointOperator> ops{tdr};

  Point fixed{0.0, 1.0};
  CHECK(residual(fixed, ops) <= 1e-12);
  Point notfixed{0.0, -1.0};
  CHECK(residual(notfixed, ops) > 1e-6);

  // identity pieces collapse to the identity
  FixedPointOperator id;
  id.apply = [](const Point& p) { return p; };
  auto t_id = dr_operator(id, id);
  Point w{0.4, -0.7};
  CHECK(dist(t_id.apply(w), w) == 0.0);
}

TEST_CASE("average of operators") {
  auto l1 = projection_op(make_affine({0.0, 0.0}, {{1.0, 0.0}}));
  auto l2 = projection_op(make_affine({0.0, 0.0}, {{0.0, 1.0}}));
  auto single = average({l1}, {1.0});
  Point p{0.3, 0.7};
  CHECK(dist(single(p), l1.apply(p)) == 0.0);

  auto twice = average({l1, l1}, {0.5, 0.5});
  CHECK(dist(twice(p), l1.apply(p)) <= 1e-15);

  // closed-form mean of two line projections
  auto avg = average({l1, l2}, {0.5, 0.5});
  Point got = avg(p);
  CHECK(got[0] == doctest::Approx(0.15));
  CHECK(got[1] == doctest::Approx(0.35));

  CHECK_THROWS_AS(average({l1, l2}, {0.6, 0.5}), std::invalid_argument);
}

TEST_CASE("residual") {
  auto c1 = projection_op(make_gamma_epigraph());
  auto c2 = projection_op(make_affine({0.0, 0.0}, {{1.0, 0.0}}));
  std::vector<FixedPointOperator> ops{c1, c2};
  CHECK(residual({0.0, 0.0}, ops) <= 1e-12);
  for (double t : {0.1, 0.3, 0.45}) {
    double r = residual({t, 0.0}, ops);
    CHECK(r > 0.0);
    CHECK(r == doctest::Approx(dist(Point{t, 0.0}, c1.apply({t, 0.0}))));
  }
  std::vector<FixedPointOperator> one{c1};
  Point p{0.2, -0.1};
  CHECK(residual(p, one) == doctest::Approx(dist(p, c1.apply(p))));
}

TEST_CASE("distance formulas") {
  CHECK(distance_to(make_dr_fix_ray(), {3.0, -4.0}) == doctest::Approx(5.0));
  CHECK(distance_to(make_dr_fix_ray(), {0.0, 7.0}) == 0.0);
  CHECK(distance_to(make_singleton({0.0, 0.0}), {1.0, 1.0}) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(distance_to(make_x_axis_plane(3, {1}), {1.0, -2.0, 3.0}) == doctest::Approx(2.0));
  CHECK(distance_to(make_halfspace({0.0, 2.0}, 1.0), {5.0, 1.5}) == doctest::Approx(1.0));
  double inf = std::numeric_limits<double>::infinity();
  CHECK(distance_to(make_box({-inf, 0.0, 0.0}, {0.0, 0.0, inf}), {0.3, 0.4, -1.2}) ==
        doctest::Approx(std::sqrt(0.09 + 0.16 + 1.44)));
  CHECK_THROWS_AS(distance_to(make_exp_cone(), {0.0, 0.0, 0.0}), std::invalid_argument);
  CHECK_FALSE(has_distance_formula(make_gamma_epigraph()));
}

TEST_CASE("set membership consistent with distance") {
  auto ray = make_dr_fix_ray();
  CHECK(member(ray, {0.0, 2.0}));
  CHECK_FALSE(member(ray, {0.1, 2.0}));
  auto K = make_exp_cone();
  CHECK(member(K, {0.0, 1.0, 3.0}));
  CHECK(member(K, {-5.0, 0.0, 2.0}));
  CHECK_FALSE(member(K, {1.0, 0.0, -1.0}));
}
