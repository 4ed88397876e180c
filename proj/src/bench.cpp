#include "karamata/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>

#include "json.hpp"

namespace karamata::bench {

namespace {

using operators::Point;
using operators::SetDescriptor;

regvar::RegFunc three_piece_psi(std::function<double(double)> core, double c,
                                double plateau_floor, double index_hint) {
  double top = std::max(core(c), plateau_floor);
  regvar::RegFunc psi;
  psi.eval = [core, c, top](double t) {
    if (t <= 0.0) return 0.0;
    if (t <= c) return core(t);
    return top;
  };
  psi.domain_lo = 0.0;
  psi.domain_hi = std::numeric_limits<double>::infinity();
  psi.monotone = regvar::Monotone::nondecreasing;
  psi.at = regvar::Endpoint::zero;
  psi.index_hint = index_hint;
  return psi;
}

double get_param(const std::map<std::string, double>& params,
                 const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

// lowest constant kappa with dist((t,0),F) <= kappa*shape(residual) along the
// critical axis direction, padded by 10%
double audit_axis_kappa(const SetDescriptor& c1,
                        const std::function<double(double)>& shape,
                        double t_max) {
  double kappa = 0.0;
  for (int i = 0; i <= 80; ++i) {
    double t = t_max * std::exp(-0.18 * i);
    Point p{t, 0.0};
    double res = operators::dist(operators::project(c1, p), p);
    if (!(res > 0.0)) continue;
    double s = shape(res);
    if (s > 0.0) kappa = std::max(kappa, t / s);
  }
  if (!(kappa > 0.0)) kappa = 1.0;
  return 1.1 * kappa;
}

}  // namespace

std::vector<std::string> scenario_ids() {
  return {"holder_lines",       "holder_power", "holder_entropic_ap",
          "expcone_entropic_ap", "dr_gamma",     "logarithmic"};
}

ScenarioParts build_scenario(const std::string& id,
                             const std::map<std::string, double>& params,
                             const Point& x0_hint) {
  ScenarioParts parts;
  parts.default_stop = {};

  if (id == "holder_lines") {
    double theta = get_param(params, "theta", M_PI / 4.0);
    if (!(theta > 0.0 && theta < M_PI / 2.0)) {
      throw config_error("holder_lines: theta must lie in (0, pi/2)");
    }
    auto l1 = operators::make_affine({0.0, 0.0}, {{1.0, 0.0}});
    auto l2 = operators::make_affine({0.0, 0.0},
                                     {{std::cos(theta), std::sin(theta)}});
    parts.ops = {operators::projection_op(l1), operators::projection_op(l2)};
    parts.schedule = solver::ap_schedule();
    parts.intersection = operators::make_singleton({0.0, 0.0});
    double kappa = 1.0 / std::sin(theta / 2.0);
    regvar::RegFunc psi;
    psi.eval = [kappa](double t) { return t <= 0.0 ? 0.0 : kappa * t; };
    psi.monotone = regvar::Monotone::nondecreasing;
    psi.at = regvar::Endpoint::zero;
    psi.index_hint = 1.0;
    parts.phi_spec = {psi, 0.5, 1.0, 2, 1.0, 0.0};
    double factor = std::cos(theta) * std::cos(theta);
    parts.profile = {"geometric",
                     [factor](double k) { return std::pow(factor, 0.5 * k); },
                     rates::Regime::linear};
    parts.default_x0 = {1.0, 0.0};
    parts.default_stop.max_iter = 460;
    parts.default_stop.residual_tol = 0.0;
    parts.default_fit_window = {100, 440};
    parts.fejer_samples = {{0.0, 0.0}};
    return parts;
  }

  if (id == "holder_power") {
    double gamma = get_param(params, "gamma", 0.5);
    if (!(gamma > 0.0 && gamma < 1.0)) {
      throw config_error("holder_power: gamma must lie in (0,1)");
    }
    auto c1 = operators::make_power_epigraph(1.0 / gamma, 1.0);
    auto c2 = operators::make_affine({0.0, 0.0}, {{1.0, 0.0}});
    parts.ops = {operators::projection_op(c1), operators::projection_op(c2)};
    parts.schedule = solver::ap_schedule();
    parts.intersection = operators::make_singleton({0.0, 0.0});
    double kappa = audit_axis_kappa(
        c1, [gamma](double a) { return std::pow(a, gamma); }, 0.9);
    regvar::RegFunc psi;
    psi.eval = [kappa, gamma](double t) {
      return t <= 0.0 ? 0.0 : kappa * std::pow(t, gamma);
    };
    psi.monotone = regvar::Monotone::nondecreasing;
    psi.at = regvar::Endpoint::zero;
    psi.index_hint = gamma;
    parts.phi_spec = {psi, 0.5, 1.0, 2, 1.0, 0.0};
    parts.profile = rates::profile_holder(gamma);
    parts.default_x0 = {0.5, 0.3};
    parts.default_stop.max_iter = 20'000;
    parts.default_stop.residual_tol = 1e-14;
    parts.default_fit_window = {100, 10'000};
    parts.fejer_samples = {{0.0, 0.0}};
    return parts;
  }

  if (id == "holder_entropic_ap") {
    auto c1 = operators::make_gamma_epigraph();
    auto c2 = operators::make_affine({0.0, 0.0}, {{1.0, 0.0}});
    parts.ops = {operators::projection_op(c1), operators::projection_op(c2)};
    parts.schedule = solver::ap_schedule();
    parts.intersection = operators::make_singleton({0.0, 0.0});
    double kappa = get_param(params, "kappa", 0.55);
    double c = std::exp(-2.0);
    Point x0 = x0_hint.empty() ? Point{0.3, 0.2} : x0_hint;
    double radius = 2.0 * operators::norm(x0);
    auto core = [kappa](double t) { return -kappa * std::sqrt(t) * std::log(t); };
    parts.phi_spec = {three_piece_psi(core, c, radius, 0.5), 0.5, 1.0, 2, 1.0, 0.0};
    parts.profile = rates::profile_holder_entropic();
    parts.default_x0 = {0.3, 0.2};
    parts.default_stop.max_iter = 100'000;
    parts.default_stop.residual_tol = 0.0;
    parts.default_fit_window = {1'000, 10'000};
    parts.fejer_samples = {{0.0, 0.0}};
    return parts;
  }

  if (id == "expcone_entropic_ap") {
    auto c1 = operators::make_exp_cone();
    auto c2 = operators::make_x_axis_plane(3, {1});
    parts.ops = {operators::projection_op(c1), operators::projection_op(c2)};
    parts.schedule = solver::ap_schedule();
    double inf = std::numeric_limits<double>::infinity();
    parts.intersection = operators::make_box({-inf, 0.0, 0.0}, {0.0, 0.0, inf});
    double kappa_b = get_param(params, "kappa", 1.0);
    double c = std::exp(-2.0);
    auto core = [kappa_b](double t) { return -kappa_b * t * std::log(t); };
    double radius = 2.0;
    parts.phi_spec = {three_piece_psi(core, c, radius, 1.0), 0.5, 1.0, 2, 1.0, 0.0};
    double env_c = std::exp(1.0 / (2.0 * std::sqrt(4.5 * kappa_b * kappa_b)));
    parts.profile = rates::profile_entropic_envelope(env_c);
    parts.default_x0 = {0.1, 0.2, 0.3};
    parts.default_stop.max_iter = 20'000;
    parts.default_stop.residual_tol = 1e-12;
    parts.default_fit_window = {32, 512};
    parts.fejer_samples = {{0.0, 0.0, 0.0}, {-0.5, 0.0, 0.2}, {0.0, 0.0, 1.0}};
    return parts;
  }

  if (id == "dr_gamma") {
    auto c1 = operators::make_gamma_epigraph();
    auto c2 = operators::make_affine({0.0, 0.0}, {{1.0, 0.0}});
    auto p1 = operators::projection_op(c1);
    auto p2 = operators::projection_op(c2);
    parts.ops = {operators::dr_operator(p2, p1, operators::make_dr_fix_ray())};
    parts.schedule = solver::dr_schedule();
    parts.intersection = operators::make_dr_fix_ray();
    double kappa = get_param(params, "kappa", 2.0 * std::sqrt(2.0) + 1.0);
    double c = std::exp(-2.0);
    Point x0 = x0_hint.empty() ? Point{0.3, -0.1} : x0_hint;
    double radius = 1.5 * (operators::distance_to(parts.intersection, x0) + 0.1);
    auto core = [kappa](double t) { return -kappa * std::sqrt(t) * std::log(t); };
    parts.phi_spec = {three_piece_psi(core, c, radius, 0.5), 0.5, 1.0, 1, 1.0, 0.0};
    parts.profile = rates::profile_holder_entropic();
    parts.default_x0 = {0.3, -0.1};
    parts.default_stop.max_iter = 20'000;
    parts.default_stop.residual_tol = 0.0;
    parts.default_fit_window = {100, 10'000};
    parts.fejer_samples = {{0.0, 0.0}, {0.0, 0.5}, {0.0, 2.0}};
    return parts;
  }

  if (id == "logarithmic") {
    double gl = get_param(params, "gamma_log", 1.0);
    if (!(gl > 0.0)) throw config_error("logarithmic: gamma_log must be positive");
    auto c1 = operators::make_flat_epigraph(1.0 / gl);
    auto c2 = operators::make_affine({0.0, 0.0}, {{1.0, 0.0}});
    parts.ops = {operators::projection_op(c1), operators::projection_op(c2)};
    parts.schedule = solver::ap_schedule();
    parts.intersection = operators::make_singleton({0.0, 0.0});
    auto shape = [gl](double a) {
      return a >= 1.0 ? 1.0 : std::pow(-1.0 / std::log(a), gl);
    };
    double kappa = audit_axis_kappa(c1, shape, 0.9 * c1.x_cap);
    double c = std::exp(-2.0);
    auto core = [kappa, shape](double t) { return kappa * shape(t); };
    parts.phi_spec = {three_piece_psi(core, c, 1.0, 0.0), 0.5, 1.0, 2, 1.0, 0.0};
    parts.profile = rates::profile_logarithmic(gl);
    parts.default_x0 = {0.3, 0.1};
    parts.default_stop.max_iter = 20'000;
    parts.default_stop.residual_tol = 0.0;
    parts.default_fit_window = {100, 10'000};
    parts.fejer_samples = {{0.0, 0.0}};
    return parts;
  }

  throw config_error("unknown scenario id: " + id);
}

RateReport run_scenario(const ScenarioConfig& cfg) {
  ScenarioParts parts = build_scenario(cfg.scenario, cfg.params, cfg.x0);
  Point x0 = cfg.x0.empty() ? parts.default_x0 : cfg.x0;
  if (x0.size() != parts.default_x0.size()) {
    throw config_error("run_scenario: x0 dimension mismatch");
  }
  for (double v : x0) {
    if (!std::isfinite(v)) throw config_error("run_scenario: x0 must be finite");
  }
  solver::StopRule stop = parts.default_stop;
  if (cfg.max_iter) stop.max_iter = *cfg.max_iter;
  if (cfg.residual_tol) stop.residual_tol = *cfg.residual_tol;
  auto window = cfg.fit_window.first > 0 ? cfg.fit_window : parts.default_fit_window;
  if (window.first < 1 || window.second <= window.first ||
      window.second > stop.max_iter) {
    throw config_error("run_scenario: fit window must lie within [1, max_iter]");
  }

  RateReport report;
  report.scenario = cfg.scenario;
  report.fit_window = window;
  report.trace = solver::run(parts.ops, parts.schedule, x0, stop, parts.intersection);

  double d0 = operators::distance_to(parts.intersection, x0);
  rates::RateBound bound(parts.phi_spec, d0 * d0);

  // regime from the regularity-function index
  double rho = parts.phi_spec.psi_B.index_hint.value_or(1.0);
  report.regime = rates::classify_rate({rho, 0.0}, true).regime;

  // thin rows geometrically; dense start, always keep the last record
  long last_k = report.trace.records.back().k;
  double keep_next = 0.0;
  double profile_scale = 1.0;
  bool crossover = false;
  double switch_const = 1.0;
  for (const auto& rec : report.trace.records) {
    bool keep = rec.k <= 64 || rec.k >= static_cast<long>(keep_next) || rec.k == last_k;
    if (!keep) continue;
    keep_next = std::max(static_cast<double>(rec.k) + 1.0, rec.k * 1.03);
    ReportRow row;
    row.k = rec.k;
    row.dist = rec.dist.value_or(std::numeric_limits<double>::quiet_NaN());
    row.residual = rec.residual;
    double prof = parts.profile.eval(std::max<double>(1.0, static_cast<double>(rec.k)));
    row.profile = profile_scale * prof;
    if (!crossover) {
      try {
        row.bound = bound.at(rec.k);
        switch_const = prof > 0.0 ? row.bound / prof : 1.0;
      } catch (const rates::underflow_error&) {
        crossover = true;
        report.underflow_crossover = true;
        report.crossover_k = rec.k;
        row.bound = switch_const * prof;
      }
    } else {
      row.bound = switch_const * prof;
    }
    report.rows.push_back(row);
  }

  try {
    Fit f = fit_rate(report.rows, FitModel::loglog_slope, window);
    report.fitted["loglog_slope"] = f.value;
    report.fitted["loglog_spread"] = f.spread;
  } catch (const std::exception&) {}
  try {
    Fit f = fit_rate(report.rows, FitModel::linear_factor, window);
    report.fitted["linear_factor"] = f.value;
  } catch (const std::exception&) {}
  try {
    Fit f = fit_rate(report.rows, FitModel::profile_constant, window);
    report.fitted["profile_constant"] = f.value;
    report.fitted["profile_spread"] = f.spread;
  } catch (const std::exception&) {}
  return report;
}

Fit fit_rate(const std::vector<ReportRow>& rows, FitModel model,
             std::pair<long, long> window) {
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    if (r.k < window.first || r.k > window.second) continue;
    if (!(r.dist > 0.0) || !std::isfinite(r.dist)) continue;  // auto-shrink
    switch (model) {
      case FitModel::loglog_slope:
        if (r.k >= 1) {
          xs.push_back(std::log(static_cast<double>(r.k)));
          ys.push_back(std::log(r.dist));
        }
        break;
      case FitModel::linear_factor:
        xs.push_back(static_cast<double>(r.k));
        ys.push_back(std::log(r.dist));
        break;
      case FitModel::profile_constant:
        if (r.profile > 0.0 && std::isfinite(r.profile)) {
          ys.push_back(r.dist / r.profile);
        }
        break;
    }
  }
  if (model == FitModel::profile_constant) {
    if (ys.empty()) throw std::runtime_error("fit_rate: empty window");
    std::vector<double> sorted = ys;
    std::sort(sorted.begin(), sorted.end());
    Fit f;
    f.value = sorted[sorted.size() / 2];
    f.spread = sorted.back() / std::max(sorted.front(), 1e-300);
    f.n = ys.size();
    return f;
  }
  if (xs.size() < 2) throw std::runtime_error("fit_rate: empty window");
  double n = static_cast<double>(xs.size());
  double sx = std::accumulate(xs.begin(), xs.end(), 0.0);
  double sy = std::accumulate(ys.begin(), ys.end(), 0.0);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double icept = (sy - slope * sx) / n;
  double rms = 0.0, worst = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (icept + slope * xs[i]);
    rms += r * r;
    worst = std::max(worst, std::abs(r));
  }
  Fit f;
  f.value = slope;
  f.spread = worst;
  f.n = xs.size();
  return f;
}

std::string format_shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::filesystem::path> emit(const RateReport& report,
                                        EmitFormat format,
                                        const std::filesystem::path& outdir,
                                        const std::string& basename) {
  std::filesystem::create_directories(outdir);
  std::vector<std::filesystem::path> written;
  if (format == EmitFormat::csv) {
    auto path = outdir / (basename + ".csv");
    std::ofstream os(path);
    if (!os) throw std::runtime_error("emit: cannot open " + path.string());
    os << "k,dist,residual,bound,profile\n";
    for (const auto& r : report.rows) {
      os << r.k << ',' << format_shortest(r.dist) << ','
         << format_shortest(r.residual) << ',' << format_shortest(r.bound) << ','
         << format_shortest(r.profile) << '\n';
    }
    if (!os.good()) throw std::runtime_error("emit: write failed for " + path.string());
    written.push_back(path);
    return written;
  }
  struct Curve {
    const char* name;
    std::function<double(const ReportRow&)> pick;
  };
  const Curve curves[] = {
      {"dist", [](const ReportRow& r) { return r.dist; }},
      {"residual", [](const ReportRow& r) { return r.residual; }},
      {"bound", [](const ReportRow& r) { return r.bound; }},
      {"profile", [](const ReportRow& r) { return r.profile; }},
  };
  for (const auto& c : curves) {
    auto path = outdir / (basename + "_" + c.name + ".dat");
    std::ofstream os(path);
    if (!os) throw std::runtime_error("emit: cannot open " + path.string());
    for (const auto& r : report.rows) {
      double v = c.pick(r);
      if (!(v > 0.0) || !std::isfinite(v) || r.k < 1) continue;
      os << r.k << ' ' << format_shortest(v) << '\n';
    }
    written.push_back(path);
  }
  return written;
}

ScenarioConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw config_error(std::string("config parse failure: ") + e.what());
  }
  try {
    ScenarioConfig cfg;
    if (!j.contains("scenario") || !j["scenario"].is_string()) {
      throw config_error("config: missing scenario id");
    }
    cfg.scenario = j["scenario"].get<std::string>();
    auto ids = scenario_ids();
    if (std::find(ids.begin(), ids.end(), cfg.scenario) == ids.end()) {
      throw config_error("config: unknown scenario " + cfg.scenario);
    }
    if (j.contains("params")) {
      for (auto& [k, v] : j["params"].items()) {
        if (!v.is_number()) throw config_error("config: params must be numeric");
        cfg.params[k] = v.get<double>();
      }
    }
    if (j.contains("x0")) {
      for (auto& v : j["x0"]) cfg.x0.push_back(v.get<double>());
    }
    if (j.contains("stop")) {
      auto& s = j["stop"];
      if (s.contains("max_iter")) cfg.max_iter = s["max_iter"].get<long>();
      if (s.contains("residual_tol")) {
        cfg.residual_tol = s["residual_tol"].get<double>();
      }
    }
    if (j.contains("report")) {
      auto& r = j["report"];
      if (r.contains("fit_window")) {
        auto w = r["fit_window"];
        if (!w.is_array() || w.size() != 2) {
          throw config_error("config: fit_window must be [lo, hi]");
        }
        cfg.fit_window = {w[0].get<long>(), w[1].get<long>()};
      }
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned>();
    return cfg;
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error(std::string("config: ") + e.what());
  }
}

}  // namespace karamata::bench
