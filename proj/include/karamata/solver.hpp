#pragma once

#include <optional>
#include <string>
#include <vector>

#include "karamata/operators.hpp"
#include "karamata/regvar.hpp"

namespace karamata::solver {

using operators::FixedPointOperator;
using operators::Point;
using operators::SetDescriptor;

struct QuasiCyclicSchedule {
  std::function<std::vector<double>(long)> weights_at;
  int m = 1;        // number of operators
  double nu = 1.0;  // inf of positive weights
  int s = 1;        // covering window
};

QuasiCyclicSchedule ap_schedule(int m = 2);
QuasiCyclicSchedule dr_schedule();
QuasiCyclicSchedule parallel_schedule(std::vector<double> weights);

// Samples k in [0, horizon) and verifies the covering-window and minimum
// positive weight invariants.
bool check_schedule(const QuasiCyclicSchedule& sched, long horizon = 64);

struct StopRule {
  long max_iter = 1'000'000;
  double residual_tol = 1e-12;
  std::optional<double> dist_tol;
};

enum class StopReason { max_iter, residual_tol, dist_tol, numeric_failure };

std::string stop_reason_name(StopReason r);

struct TraceRecord {
  long k;
  Point x;
  double residual;
  std::optional<double> dist;
  double wallclock;  // seconds since run start
};

struct IterationTrace {
  std::vector<TraceRecord> records;
  int m = 0;
  double nu = 1.0;
  int s = 1;
  StopReason stop = StopReason::max_iter;
};

// Quasi-cyclic iteration x_{k+1} = sum_i w_i^k T_i(x_k). Records every
// iterate up to 100000, geometrically thinned checkpoints afterwards.
// dist column is filled when an intersection descriptor with an exact
// distance formula is supplied.
IterationTrace run(const std::vector<FixedPointOperator>& ops,
                   const QuasiCyclicSchedule& sched, Point x0, StopRule stop,
                   std::optional<SetDescriptor> intersection = {});

struct FejerViolation {
  long k_from, k_to;
  size_t y_index;
  double increase;
};

struct FejerReport {
  std::vector<FejerViolation> violations;
  size_t comparisons = 0;
  bool passed() const { return violations.empty(); }
};

// Checks ||x_{k+1} - y|| <= ||x_k - y|| + slack along the recorded trace for
// each sample y; membership of the samples in the common fixed set is
// verified against the operators first.
FejerReport audit_fejer(const IterationTrace& trace,
                        const std::vector<Point>& y_samples,
                        const std::vector<FixedPointOperator>& ops,
                        double slack = 1e-10);

// Sampled estimate of a -> max { dist(y, intersection) : residual(y) <= a,
// ||y|| <= r }. Returned as a nondecreasing staircase.
regvar::RegFunc estimate_empirical_psi(const std::vector<FixedPointOperator>& ops,
                                       const SetDescriptor& intersection,
                                       double r,
                                       const std::vector<double>& a_grid,
                                       int samples_per_a = 10'000);

}  // namespace karamata::solver
