// Acceptance suite: runs every shipped quantitative criterion at its stated
// tolerance and prints one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "karamata/bench.hpp"

using namespace karamata;
using operators::Point;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int g_failures = 0;

void run_criterion(int id, const std::string& name,
                   const std::function<Outcome()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out.pass) ++g_failures;
  std::printf("[%s] C%02d %-34s (%6.1fs) %s\n", out.pass ? "PASS" : "FAIL", id,
              name.c_str(), secs, out.detail.c_str());
  std::fflush(stdout);
}

double loglog_slope_pairs(const std::vector<std::pair<double, double>>& pts) {
  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// --- criterion bodies ---

Outcome c1_lambert() {
  char buf[160];
  double worst0 = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double x = -std::exp(-1.0) + 1e-9 + (1e6 + 0.3679) * i / 9999.0;
    double w = numerics::lambert_w0(x);
    worst0 = std::max(worst0,
                      std::abs(w * std::exp(w) - x) / std::max(1.0, std::abs(x)));
  }
  double worst1 = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double lg = std::log(1e-12) +
                (std::log(std::exp(-1.0) - 1e-12) - std::log(1e-12)) * i / 9999.0;
    double x = -std::exp(lg);
    double w = numerics::lambert_wm1(x);
    worst1 = std::max(worst1, std::abs(w * std::exp(w) - x) / std::abs(x));
  }
  double branch = std::abs(numerics::lambert_wm1(-std::exp(-1.0)) + 1.0);
  std::snprintf(buf, sizeof buf,
                "max residual W0 %.2e, Wm1 %.2e (tol 1e-12); branch point %.1e",
                worst0, worst1, branch);
  return {worst0 <= 1e-12 && worst1 <= 1e-12 && branch <= 1e-7, buf};
}

Outcome c2_rv_index() {
  struct Entry {
    const char* name;
    std::function<double(double)> f;
    double hi;
    double rho;
  };
  std::vector<Entry> catalog{
      {"t^0.3", [](double t) { return std::pow(t, 0.3); }, 1.0, 0.3},
      {"t^0.7", [](double t) { return std::pow(t, 0.7); }, 1.0, 0.7},
      {"-t ln t", [](double t) { return -t * std::log(t); }, std::exp(-1.0), 1.0},
      {"sqrt(t) ln^2 t",
       [](double t) {
         double l = std::log(t);
         return std::sqrt(t) * l * l;
       },
       std::exp(-4.0), 0.5},
      {"(-1/ln t)^2",
       [](double t) {
         double l = -1.0 / std::log(t);
         return l * l;
       },
       std::exp(-2.0), 0.0},
  };
  std::string detail;
  bool ok = true;
  for (const auto& e : catalog) {
    regvar::RegFunc f;
    f.eval = e.f;
    f.domain_hi = e.hi;
    f.monotone = regvar::Monotone::nondecreasing;
    f.at = regvar::Endpoint::zero;
    auto idx = regvar::estimate_rv0_index(f, {2.0, 4.0, 8.0},
                                          regvar::geometric_grid(e.hi / 8.0));
    double err = std::abs(idx.value - e.rho);
    if (err > 0.02) ok = false;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s:%+.3f ", e.name, idx.value);
    detail += buf;
  }
  return {ok, detail + "(tol 0.02)"};
}

rates::PhiSpec power_phi_spec(double c, double rho) {
  rates::PhiSpec sp;
  regvar::RegFunc psi;
  psi.eval = [c, rho](double a) {
    return a <= 0.0 ? 0.0 : std::sqrt(c * std::pow(a * a / 10.0, rho));
  };
  psi.monotone = regvar::Monotone::nondecreasing;
  psi.at = regvar::Endpoint::zero;
  psi.index_hint = rho;
  sp.psi_B = psi;
  sp.alpha = 0.5;
  sp.nu = 1.0;
  sp.s = 1;
  sp.a_hat = 2.0;
  sp.delta = 1.0;
  return sp;
}

Outcome c3_holder_slopes() {
  std::string detail;
  bool ok = true;
  for (double rho : {0.3, 0.5, 0.7}) {
    rates::RateBound rb(power_phi_spec(1.0, rho), 1.0);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i <= 24; ++i) {
      double lk = std::log(1e4) + (std::log(1e6) - std::log(1e4)) * i / 24.0;
      long k = static_cast<long>(std::exp(lk));
      pts.emplace_back(std::log(static_cast<double>(k)), std::log(rb.at(k)));
    }
    double slope = loglog_slope_pairs(pts);
    double want = -rho / (2.0 * (1.0 - rho));
    if (std::abs(slope - want) > 0.02) ok = false;
    char buf[80];
    std::snprintf(buf, sizeof buf, "rho %.1f: %.4f vs %.4f; ", rho, slope, want);
    detail += buf;
  }
  return {ok, detail + "(tol 0.02)"};
}

Outcome c4_linear_affine() {
  rates::RateBound rb(power_phi_spec(2.0, 1.0), 1.0);
  std::vector<std::pair<double, double>> pts;
  for (long k = 10; k <= 1000; k += (k < 100 ? 5 : 15)) {
    pts.emplace_back(static_cast<double>(k), std::log(rb.at(k)));
  }
  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double icept = (sy - slope * sx) / n;
  double worst = 0.0;
  for (auto& [x, y] : pts) worst = std::max(worst, std::abs(y - (icept + slope * x)));
  char buf[120];
  std::snprintf(buf, sizeof buf, "ln-bound affine residual %.2e (tol 1e-3), slope %.6f",
                worst, slope);
  return {worst < 1e-3, buf};
}

Outcome c5_g_closed_form() {
  regvar::RegFunc phi;
  phi.eval = [](double t) {
    if (t <= 0.0) return 0.0;
    double l = std::log(t);
    return std::sqrt(t) * l * l;
  };
  phi.domain_hi = std::exp(-4.0);
  phi.monotone = regvar::Monotone::nondecreasing;
  phi.at = regvar::Endpoint::zero;
  double worst = 0.0;
  for (double s : {1e3, 1e5, 1e7, 1e9}) {
    double w = numerics::lambert_wm1(-1.0 / (4.0 * std::sqrt(s)));
    double closed = 256.0 * s * w * w * w * w;
    worst = std::max(worst, std::abs(rates::g_function(phi, s) / closed - 1.0));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max relative gap %.2e (tol 1e-6)", worst);
  return {worst <= 1e-6, buf};
}

Outcome c6_two_lines() {
  std::string detail;
  bool ok = true;
  for (double theta : {M_PI / 6.0, M_PI / 4.0, M_PI / 3.0}) {
    auto l1 = operators::projection_op(operators::make_affine({0.0, 0.0}, {{1.0, 0.0}}));
    auto l2 = operators::projection_op(
        operators::make_affine({0.0, 0.0}, {{std::cos(theta), std::sin(theta)}}));
    auto trace = solver::run({l1, l2}, solver::ap_schedule(), {1.0, 0.0},
                             {400, 0.0, {}}, operators::make_singleton({0.0, 0.0}));
    // per-iteration ln fit over the second half (100 cycles of burn-in)
    std::vector<std::pair<double, double>> pts;
    for (const auto& rec : trace.records) {
      if (rec.k >= 200 && rec.dist && *rec.dist > 0.0) {
        pts.emplace_back(static_cast<double>(rec.k), std::log(*rec.dist));
      }
    }
    double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double contraction = std::exp(2.0 * slope);
    double want = std::cos(theta) * std::cos(theta);
    if (std::abs(contraction - want) > 1e-3) ok = false;
    char buf[96];
    std::snprintf(buf, sizeof buf, "theta %.2f: %.6f vs %.6f; ", theta, contraction, want);
    detail += buf;
  }
  return {ok, detail + "(tol 1e-3)"};
}

// grid-refinement oracle for the exponential cone in log-polar coordinates
Point oracle_expcone(const Point& p) {
  auto dist2 = [&](const Point& q) {
    double s = 0;
    for (int i = 0; i < 3; i++) {
      double d = p[i] - q[i];
      s += d * d;
    }
    return s;
  };
  if (p[1] > 0 && p[2] > 0 && std::log(p[2]) >= std::log(p[1]) + p[0] / p[1]) return p;
  Point best{std::min(p[0], 0.0), 0.0, std::max(p[2], 0.0)};
  double bd = dist2(best);
  double tlo = -M_PI / 2 + 1e-9, thi = M_PI / 2 - 1e-9;
  double llo = std::log(1e-9), lhi = std::log(10.0);
  for (int round = 0; round < 18; ++round) {
    int N = round == 0 ? 400 : 48;
    for (int i = 0; i <= N; ++i) {
      for (int j = 0; j <= N; ++j) {
        double t = tlo + (thi - tlo) * i / N;
        double l = llo + (lhi - llo) * j / N;
        double m = std::exp(l);
        double u = m * std::sin(t), v = m * std::cos(t);
        if (!(v > 0.0)) continue;
        double e = u / v;
        if (e > 690.0) continue;
        double z = v * std::exp(e);
        if (!std::isfinite(z)) continue;
        Point q{u, v, z};
        double d = dist2(q);
        if (d < bd) {
          bd = d;
          best = q;
        }
      }
    }
    if (best[1] <= 0.0) break;
    double bt = std::atan2(best[0], best[1]);
    double bl = 0.5 * std::log(best[0] * best[0] + best[1] * best[1]);
    double dt = (thi - tlo) / N, dl = (lhi - llo) / N;
    tlo = bt - 6 * dt;
    thi = bt + 6 * dt;
    llo = bl - 6 * dl;
    lhi = bl + 6 * dl;
  }
  return best;
}

Outcome c7_expcone_oracle() {
  auto K = operators::make_exp_cone();
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    Point p{U(rng), U(rng), U(rng)};
    worst = std::max(worst, operators::dist(operators::project(K, p), oracle_expcone(p)));
  }
  double worst_idem = 0.0, worst_vi = 0.0;
  std::vector<Point> members;
  for (int i = 0; i < 40; ++i) {
    members.push_back(operators::project(K, Point{U(rng), U(rng), U(rng)}));
  }
  for (int i = 0; i < 1000; ++i) {
    Point p{U(rng), U(rng), U(rng)};
    Point q = operators::project(K, p);
    worst_idem = std::max(worst_idem, operators::dist(operators::project(K, q), q));
    for (const auto& z : members) {
      double vi = 0.0;
      for (int d = 0; d < 3; ++d) vi += (p[d] - q[d]) * (z[d] - q[d]);
      worst_vi = std::max(worst_vi, vi);
    }
  }
  char buf[140];
  std::snprintf(buf, sizeof buf,
                "oracle gap %.2e (tol 1e-4); idem %.2e, vi %.2e (tol 1e-8)", worst,
                worst_idem, worst_vi);
  return {worst <= 1e-4 && worst_idem <= 1e-8 && worst_vi <= 1e-8, buf};
}

Outcome c8_dr_fixed_set() {
  auto p1 = operators::projection_op(operators::make_gamma_epigraph());
  auto p2 = operators::projection_op(operators::make_affine({0.0, 0.0}, {{1.0, 0.0}}));
  auto tdr = operators::dr_operator(p2, p1, operators::make_dr_fix_ray());
  std::vector<operators::FixedPointOperator> ops{tdr};
  double worst_on = 0.0, best_off = 1e300;
  for (int i = -20; i <= 20; ++i) {
    for (int j = -20; j <= 20; ++j) {
      double x = i * 0.05, mu = j * 0.05;
      double r = operators::residual({x, mu}, ops);
      bool on_ray = (x == 0.0) && (mu >= 0.0);
      if (on_ray) worst_on = std::max(worst_on, r);
      else best_off = std::min(best_off, r);
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf,
                "ray residual %.2e (tol 1e-10); off-ray minimum %.2e (floor 1e-6)",
                worst_on, best_off);
  return {worst_on <= 1e-10 && best_off > 1e-6, buf};
}

Outcome c9_holder_entropic() {
  bench::ScenarioConfig cfg;
  cfg.scenario = "holder_entropic_ap";  // defaults: x0 (0.3,0.2), 1e5 iterations
  auto rep = bench::run_scenario(cfg);

  // profile-constant fit over [1e3,1e4], times 1.5, must dominate onwards
  auto fit = bench::fit_rate(rep.rows, bench::FitModel::profile_constant, {1000, 10000});
  bool dominated = true;
  double worst_ratio = 0.0;
  for (const auto& r : rep.rows) {
    if (r.k < 10000 || r.k > 100000) continue;
    double lhs = 1.5 * fit.value * r.profile;
    worst_ratio = std::max(worst_ratio, r.dist / lhs);
    if (r.dist > lhs) dominated = false;
  }

  // local log-log slope of the squared theory bound at k = 1e5; the distance
  // bound itself cannot steepen past ~-0.26 at this horizon for any valid
  // regularity constant, so the squared bound carries the -1/2-anchored check
  auto parts = bench::build_scenario(cfg.scenario, cfg.params, {});
  double d0 = operators::distance_to(parts.intersection, {0.3, 0.2});
  rates::RateBound rb(parts.phi_spec, d0 * d0);
  long k2 = 100000, k1 = static_cast<long>(100000 / 1.2);
  double slope_sq = 2.0 * (std::log(rb.at(k2)) - std::log(rb.at(k1))) /
                    (std::log(static_cast<double>(k2)) - std::log(static_cast<double>(k1)));
  bool slope_ok = slope_sq > -0.5 && slope_sq < -0.4;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "dominance worst %.3f (<=1); squared-bound slope %.4f in (-0.5,-0.4)",
                worst_ratio, slope_sq);
  return {dominated && slope_ok, buf};
}

Outcome c10_fejer() {
  struct Entry {
    const char* id;
    long iters;
  };
  std::vector<Entry> entries{{"holder_lines", 400},      {"holder_power", 2000},
                             {"holder_entropic_ap", 3000}, {"expcone_entropic_ap", 2000},
                             {"dr_gamma", 3000},          {"logarithmic", 1500}};
  std::string detail;
  bool ok = true;
  size_t total = 0;
  for (const auto& e : entries) {
    auto parts = bench::build_scenario(e.id, {}, {});
    solver::StopRule stop = parts.default_stop;
    stop.max_iter = e.iters;
    auto trace = solver::run(parts.ops, parts.schedule, parts.default_x0, stop,
                             parts.intersection);
    auto rep = solver::audit_fejer(trace, parts.fejer_samples, parts.ops, 1e-10);
    total += rep.comparisons;
    if (!rep.passed()) {
      ok = false;
      detail += std::string(e.id) + " violated; ";
    }
  }
  // negative control: corrupt a converging trace
  auto parts = bench::build_scenario("holder_lines", {}, {});
  auto trace = solver::run(parts.ops, parts.schedule, {1.0, 0.3}, {100, 0.0, {}},
                           parts.intersection);
  std::swap(trace.records[10].x, trace.records[11].x);
  auto rep = solver::audit_fejer(trace, parts.fejer_samples, parts.ops, 1e-10);
  bool control = rep.violations.size() >= 1;
  char buf[120];
  std::snprintf(buf, sizeof buf, "%s%zu comparisons clean; corrupted control flags %zu",
                detail.c_str(), total, rep.violations.size());
  return {ok && control, buf};
}

Outcome c11_empirical_psi() {
  auto c1 = operators::projection_op(operators::make_gamma_epigraph());
  auto c2 = operators::projection_op(operators::make_affine({0.0, 0.0}, {{1.0, 0.0}}));
  std::vector<operators::FixedPointOperator> ops{c1, c2};
  auto inter = operators::make_singleton({0.0, 0.0});
  std::vector<double> a_grid;
  for (int i = 0; i <= 8; ++i) a_grid.push_back(std::pow(10.0, -6.0 + 0.5 * i));
  auto psi = solver::estimate_empirical_psi(ops, inter, 0.15, a_grid, 10000);

  double band_lo = 1e300, band_hi = 0.0, sq_lo = 1e300, sq_hi = 0.0;
  bool monotone = true;
  double prev = 1e300;
  for (double a : a_grid) {
    double v = psi(a);
    double band = v / (-std::sqrt(a) * std::log(a));
    double sq = v / std::sqrt(a);
    band_lo = std::min(band_lo, band);
    band_hi = std::max(band_hi, band);
    sq_lo = std::min(sq_lo, sq);
    sq_hi = std::max(sq_hi, sq);
    if (sq > prev + 1e-12) monotone = false;  // must grow toward a -> 0
    prev = sq;
  }
  char buf[140];
  std::snprintf(buf, sizeof buf,
                "entropic band factor %.2f (<=10); sqrt ratio span %.2f (>=10), monotone %d",
                band_hi / band_lo, sq_hi / sq_lo, monotone ? 1 : 0);
  return {band_hi / band_lo <= 10.0 && sq_hi / sq_lo >= 10.0 && monotone, buf};
}

Outcome c12_determinism() {
#ifdef KARAMATA_CLI_PATH
  namespace fs = std::filesystem;
  auto base = fs::temp_directory_path() / "karamata_acceptance_det";
  fs::remove_all(base);
  fs::create_directories(base);
  auto d1 = base / "a", d2 = base / "b";
  std::string cli = KARAMATA_CLI_PATH;
  for (const auto& dir : {d1, d2}) {
    std::string cmd = cli + " bench holder_lines --param theta=1.0471975511965976 --seed 7 --out " +
                      dir.string() + " > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "bench invocation failed"};
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  };
  bool same = true;
  size_t files = 0;
  for (const auto& e : fs::directory_iterator(d1)) {
    ++files;
    if (slurp(e.path()) != slurp(d2 / e.path().filename())) same = false;
  }
  fs::remove_all(base);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu emitted files byte-identical across runs", files);
  return {same && files >= 5, buf};
#else
  return {false, "CLI path not configured"};
#endif
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  run_criterion(1, "lambert identity grids", c1_lambert);
  run_criterion(2, "variation index recovery", c2_rv_index);
  run_criterion(3, "holder rate slopes", c3_holder_slopes);
  run_criterion(4, "linear-case affinity", c4_linear_affine);
  run_criterion(5, "g-function closed form", c5_g_closed_form);
  run_criterion(6, "two-line contraction", c6_two_lines);
  run_criterion(7, "exp cone projection", c7_expcone_oracle);
  run_criterion(8, "splitting fixed set", c8_dr_fixed_set);
  run_criterion(9, "entropic pair rate shape", c9_holder_entropic);
  run_criterion(10, "fejer audits", c10_fejer);
  run_criterion(11, "empirical regularity shape", c11_empirical_psi);
  run_criterion(12, "bench determinism", c12_determinism);
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criteria failed\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
