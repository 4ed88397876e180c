#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace karamata::operators {

using Point = std::vector<double>;

double norm(const Point& p);
double dist(const Point& a, const Point& b);

// Entropic pair: gamma is the convex even function with gamma(0)=0 whose
// inverse on [0, 0.5] is y -> -sqrt(y)*ln(y).
double gamma_fn(double x);
double gamma_inv(double y);
double gamma_half();  // gamma(0.5), cached

enum class SetKind {
  affine,
  halfspace,
  exp_cone,
  gamma_epigraph,
  power_epigraph,
  flat_epigraph,
  x_axis_plane,
  dr_fix_ray,
  singleton,
  box,
};

// Closed convex sets the solver and scenarios work with. Parameters by kind:
//   affine:         anchor + orthonormal basis of the flat
//   halfspace:      { x : <normal, x> <= offset }
//   exp_cone:       closure of { x2 > 0, x3 >= x2*exp(x1/x2) } in R^3
//   gamma_epigraph: { (x, mu) : |x| <= 0.5, gamma(x) <= mu }
//   power_epigraph: { (x, mu) : |x| <= x_cap, |x|^power <= mu }
//   flat_epigraph:  { (x, mu) : |x| <= x_cap, exp(-|x|^-flat_q) <= mu }
//   x_axis_plane:   { x in R^dim : x_i = 0 for i in zero_coords }
//   dr_fix_ray:     { (0, mu) : mu >= 0 } in R^2
//   singleton:      { anchor }
//   box:            { x : box_lo_i <= x_i <= box_hi_i } (entries may be inf)
struct SetDescriptor {
  SetKind kind;
  Point anchor;
  std::vector<Point> basis;
  Point normal;
  double offset = 0.0;
  int dim = 2;
  std::vector<int> zero_coords;
  double power = 2.0;
  double flat_q = 1.0;
  double x_cap = 0.5;
  Point box_lo;
  Point box_hi;
};

SetDescriptor make_affine(Point anchor, std::vector<Point> basis);
SetDescriptor make_halfspace(Point normal, double offset);
SetDescriptor make_exp_cone();
SetDescriptor make_gamma_epigraph();
SetDescriptor make_power_epigraph(double power, double x_cap = 1.0);
SetDescriptor make_flat_epigraph(double q);
SetDescriptor make_x_axis_plane(int dim, std::vector<int> zero_coords);
SetDescriptor make_dr_fix_ray();
SetDescriptor make_singleton(Point p);
SetDescriptor make_box(Point lo, Point hi);

Point project(const SetDescriptor& set, const Point& p);
bool member(const SetDescriptor& set, const Point& p, double tol = 1e-9);

// Exact distance formulas; throws for kinds that only support projection.
double distance_to(const SetDescriptor& set, const Point& p);
bool has_distance_formula(const SetDescriptor& set);

// Polar membership test for the exponential cone; P_K(p) = 0 iff p is polar.
bool exp_cone_polar_member(const Point& p, double tol = 1e-12);

struct FixedPointOperator {
  std::function<Point(const Point&)> apply;
  double alpha = 0.5;
  std::optional<SetDescriptor> fix_set;
};

FixedPointOperator projection_op(SetDescriptor set);

// w -> w + PB(2*PA(w) - w) - PA(w); 1/2-averaged.
FixedPointOperator dr_operator(const FixedPointOperator& PA,
                               const FixedPointOperator& PB,
                               std::optional<SetDescriptor> fix_set = {});

std::function<Point(const Point&)> average(
    const std::vector<FixedPointOperator>& ops, const std::vector<double>& weights);

// max_i ||x - T_i(x)||
double residual(const Point& x, std::span<const FixedPointOperator> ops);

}  // namespace karamata::operators
