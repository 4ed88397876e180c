#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "karamata/rates.hpp"
#include "karamata/solver.hpp"

namespace karamata::bench {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  std::string scenario;
  std::map<std::string, double> params;
  operators::Point x0;  // empty selects the scenario default
  std::optional<long> max_iter;
  std::optional<double> residual_tol;
  std::pair<long, long> fit_window{0, 0};  // 0 selects the scenario default
  unsigned seed = 0;
};

// Known scenario ids: holder_lines, holder_power, holder_entropic_ap,
// expcone_entropic_ap, dr_gamma, logarithmic.
std::vector<std::string> scenario_ids();

struct ReportRow {
  long k;
  double dist;
  double residual;
  double bound;
  double profile;
};

struct RateReport {
  std::string scenario;
  std::vector<ReportRow> rows;
  std::map<std::string, double> fitted;
  rates::Regime regime;
  bool underflow_crossover = false;
  long crossover_k = -1;
  solver::IterationTrace trace;  // full trace for audits
  std::pair<long, long> fit_window{0, 0};
};

RateReport run_scenario(const ScenarioConfig& cfg);

// Scenario machinery exposed for direct use (tests, audits).
struct ScenarioParts {
  std::vector<operators::FixedPointOperator> ops;
  solver::QuasiCyclicSchedule schedule;
  operators::SetDescriptor intersection;
  rates::PhiSpec phi_spec;  // psi_B and the averagedness constants
  rates::RateProfile profile;
  operators::Point default_x0;
  solver::StopRule default_stop;
  std::pair<long, long> default_fit_window;
  std::vector<operators::Point> fejer_samples;
};

ScenarioParts build_scenario(const std::string& id,
                             const std::map<std::string, double>& params,
                             const operators::Point& x0_hint = {});

enum class FitModel { loglog_slope, linear_factor, profile_constant };

struct Fit {
  double value = 0.0;
  double spread = 0.0;
  size_t n = 0;
};

// dist-column fits over rows with k inside the window.
Fit fit_rate(const std::vector<ReportRow>& rows, FitModel model,
             std::pair<long, long> window);

enum class EmitFormat { csv, plotdata };

// csv: <basename>.csv with header k,dist,residual,bound,profile
// plotdata: one two-column file per curve, suitable for log-log plotting
std::vector<std::filesystem::path> emit(const RateReport& report,
                                        EmitFormat format,
                                        const std::filesystem::path& outdir,
                                        const std::string& basename = "report");

// Shortest decimal representation that parses back to the same double.
std::string format_shortest(double v);

// JSON config: {scenario, params{}, x0[], stop{max_iter,residual_tol},
// report{fit_window[lo,hi], profile}, seed}
ScenarioConfig parse_config(const std::string& json_text);

}  // namespace karamata::bench
