#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "karamata/bench.hpp"

namespace {

using karamata::bench::format_shortest;
using karamata::operators::Point;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

Point parse_point_csv(const std::string& text) {
  Point p;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    p.push_back(v);
  }
  if (p.empty()) throw karamata::bench::config_error("empty point");
  return p;
}

karamata::operators::SetDescriptor parse_set(const std::string& text) {
  using namespace karamata::operators;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw karamata::bench::config_error(std::string("bad set descriptor: ") + e.what());
  }
  std::string kind = j.value("kind", "");
  if (kind == "exp_cone") return make_exp_cone();
  if (kind == "gamma_epigraph") return make_gamma_epigraph();
  if (kind == "power_epigraph") {
    return make_power_epigraph(j.value("power", 2.0), j.value("x_cap", 1.0));
  }
  if (kind == "flat_epigraph") return make_flat_epigraph(j.value("q", 1.0));
  if (kind == "dr_fix_ray") return make_dr_fix_ray();
  if (kind == "singleton") {
    Point a = j.at("anchor").get<Point>();
    return make_singleton(std::move(a));
  }
  if (kind == "halfspace") {
    Point n = j.at("normal").get<Point>();
    return make_halfspace(std::move(n), j.value("offset", 0.0));
  }
  if (kind == "affine") {
    Point a = j.at("anchor").get<Point>();
    std::vector<Point> basis;
    for (auto& b : j.at("basis")) basis.push_back(b.get<Point>());
    return make_affine(std::move(a), std::move(basis));
  }
  if (kind == "x_axis_plane") {
    return make_x_axis_plane(j.at("dim").get<int>(),
                             j.at("zero_coords").get<std::vector<int>>());
  }
  if (kind == "box") {
    return make_box(j.at("lo").get<Point>(), j.at("hi").get<Point>());
  }
  throw karamata::bench::config_error("unknown set kind: " + kind);
}

karamata::regvar::RegFunc catalog_function(const std::string& id) {
  using karamata::regvar::Endpoint;
  using karamata::regvar::Monotone;
  using karamata::regvar::RegFunc;
  RegFunc f;
  f.domain_lo = 0.0;
  f.monotone = Monotone::nondecreasing;
  f.at = Endpoint::zero;
  if (id == "identity") {
    f.eval = [](double t) { return t; };
    f.domain_hi = 1.0;
    f.index_hint = 1.0;
    return f;
  }
  if (id == "t03" || id == "t07" || id == "sqrt") {
    double e = id == "t03" ? 0.3 : (id == "t07" ? 0.7 : 0.5);
    f.eval = [e](double t) { return std::pow(t, e); };
    f.domain_hi = 1.0;
    f.index_hint = e;
    return f;
  }
  if (id == "entropic") {
    f.eval = [](double t) { return t <= 0.0 ? 0.0 : -t * std::log(t); };
    f.domain_hi = std::exp(-1.0);
    f.index_hint = 1.0;
    return f;
  }
  if (id == "holder_entropic") {
    f.eval = [](double t) { return t <= 0.0 ? 0.0 : -std::sqrt(t) * std::log(t); };
    f.domain_hi = std::exp(-2.0);
    f.index_hint = 0.5;
    return f;
  }
  if (id == "sqrt_log_sq") {
    f.eval = [](double t) {
      if (t <= 0.0) return 0.0;
      double l = std::log(t);
      return std::sqrt(t) * l * l;
    };
    f.domain_hi = std::exp(-4.0);
    f.index_hint = 0.5;
    return f;
  }
  if (id == "inv_log_sq") {
    f.eval = [](double t) {
      if (t <= 0.0) return 0.0;
      double l = -1.0 / std::log(t);
      return l * l;
    };
    f.domain_hi = std::exp(-2.0);
    f.index_hint = 0.0;
    f.monotone = Monotone::nondecreasing;
    return f;
  }
  if (id == "logarithmic") {
    f.eval = [](double t) { return t <= 0.0 ? 0.0 : -1.0 / std::log(t); };
    f.domain_hi = std::exp(-2.0);
    f.index_hint = 0.0;
    return f;
  }
  throw karamata::bench::config_error("unknown catalog function: " + id);
}

karamata::regvar::RegFunc table_function(const std::string& csv_path) {
  std::ifstream is(csv_path);
  if (!is) throw karamata::bench::config_error("cannot open table: " + csv_path);
  auto pts = std::make_shared<std::vector<std::pair<double, double>>>();
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || !(std::isdigit(line[0]) || line[0] == '-' || line[0] == '.')) continue;
    std::stringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) continue;
    pts->emplace_back(std::stod(a), std::stod(b));
  }
  if (pts->size() < 8) throw karamata::bench::config_error("table too small");
  std::sort(pts->begin(), pts->end());
  karamata::regvar::RegFunc f;
  f.domain_lo = pts->front().first;
  f.domain_hi = pts->back().first;
  f.at = karamata::regvar::Endpoint::zero;
  // log-log interpolation between samples
  f.eval = [pts](double t) {
    auto it = std::lower_bound(pts->begin(), pts->end(), std::make_pair(t, 0.0));
    if (it == pts->begin()) return it->second;
    if (it == pts->end()) return std::prev(it)->second;
    auto lo = std::prev(it);
    double w = (std::log(t) - std::log(lo->first)) /
               (std::log(it->first) - std::log(lo->first));
    return std::exp((1.0 - w) * std::log(lo->second) + w * std::log(it->second));
  };
  return f;
}

int cmd_solve(const std::string& config_path, const std::string& out_dir) {
  std::ifstream is(config_path);
  if (!is) {
    std::cerr << "error: cannot open config " << config_path << "\n";
    return kExitConfig;
  }
  std::stringstream buf;
  buf << is.rdbuf();
  auto cfg = karamata::bench::parse_config(buf.str());
  auto report = karamata::bench::run_scenario(cfg);
  auto files = karamata::bench::emit(report, karamata::bench::EmitFormat::csv,
                                     out_dir, cfg.scenario);
  std::cout << "scenario " << report.scenario << ": " << report.rows.size()
            << " rows, regime " << karamata::rates::regime_name(report.regime)
            << "\n";
  for (const auto& [k, v] : report.fitted) {
    std::cout << "  " << k << " = " << format_shortest(v) << "\n";
  }
  for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fixed-point solver with variation-index rate bounds"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "run a scenario from a JSON config");
  std::string solve_config, solve_out = ".";
  solve->add_option("--config", solve_config, "config JSON path")->required();
  solve->add_option("--out", solve_out, "output directory");

  auto* project = app.add_subcommand("project", "project a point onto a set");
  std::string set_text, point_text;
  project->add_option("--set", set_text, "set descriptor JSON")->required();
  project->add_option("--point", point_text, "comma-separated coordinates")->required();

  auto* rvindex = app.add_subcommand("rv-index", "estimate the variation index at zero");
  std::string fn_id;
  rvindex->add_option("--function", fn_id, "catalog id or table CSV path")->required();

  auto* predict = app.add_subcommand("predict", "tabulate the distance bound");
  std::string psi_id;
  double p_alpha = 0.5, p_nu = 1.0, p_d0 = 0.5;
  int p_s = 2;
  long p_kmax = 100000;
  predict->add_option("--psi", psi_id, "regularity function catalog id")->required();
  predict->add_option("--alpha", p_alpha, "averagedness constant");
  predict->add_option("--nu", p_nu, "minimum positive weight");
  predict->add_option("--s", p_s, "covering window");
  predict->add_option("--d0", p_d0, "initial distance");
  predict->add_option("--k-max", p_kmax, "largest iteration");

  auto* bench = app.add_subcommand("bench", "run a named scenario");
  std::string bench_id, bench_out = "bench_out";
  std::vector<std::string> bench_params;
  unsigned bench_seed = 0;
  bench->add_option("scenario", bench_id, "scenario id")->required();
  bench->add_option("--param", bench_params, "scenario parameter k=v");
  bench->add_option("--out", bench_out, "output directory")->required();
  bench->add_option("--seed", bench_seed, "run seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*solve) return cmd_solve(solve_config, solve_out);

    if (*project) {
      auto set = parse_set(set_text);
      auto p = parse_point_csv(point_text);
      auto q = karamata::operators::project(set, p);
      for (size_t i = 0; i < q.size(); ++i) {
        std::cout << (i ? "," : "") << format_shortest(q[i]);
      }
      std::cout << "\n";
      return 0;
    }

    if (*rvindex) {
      karamata::regvar::RegFunc f;
      if (fn_id.find(".csv") != std::string::npos ||
          fn_id.find('/') != std::string::npos) {
        f = table_function(fn_id);
      } else {
        f = catalog_function(fn_id);
      }
      double a = std::min(f.domain_hi, 0.5);
      auto grid = karamata::regvar::geometric_grid(a / 8.0);
      auto idx = karamata::regvar::estimate_rv0_index(f, {2.0, 4.0, 8.0}, grid);
      std::cout << "index " << format_shortest(idx.value) << " residual "
                << format_shortest(idx.confidence) << "\n";
      return 0;
    }

    if (*predict) {
      karamata::rates::PhiSpec spec;
      spec.psi_B = catalog_function(psi_id);
      spec.alpha = p_alpha;
      spec.nu = p_nu;
      spec.s = p_s;
      spec.a_hat = 1.0;
      karamata::rates::RateBound rb(spec, p_d0 * p_d0);
      std::cout << "k,bound\n";
      long k = 0;
      while (k <= p_kmax) {
        double b;
        try {
          b = rb.at(k);
        } catch (const karamata::rates::underflow_error&) {
          std::cout << k << ",underflow\n";
          break;
        }
        std::cout << k << "," << format_shortest(b) << "\n";
        k = std::max(k + 1, static_cast<long>(k * 1.3));
      }
      return 0;
    }

    if (*bench) {
      karamata::bench::ScenarioConfig cfg;
      cfg.scenario = bench_id;
      cfg.seed = bench_seed;
      for (const auto& kv : bench_params) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
          throw karamata::bench::config_error("bad --param, expected k=v: " + kv);
        }
        cfg.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      }
      auto report = karamata::bench::run_scenario(cfg);
      karamata::bench::emit(report, karamata::bench::EmitFormat::csv, bench_out,
                            cfg.scenario);
      karamata::bench::emit(report, karamata::bench::EmitFormat::plotdata,
                            bench_out, cfg.scenario);
      std::cout << "scenario " << report.scenario << " rows "
                << report.rows.size() << "\n";
      return 0;
    }
  } catch (const karamata::bench::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
