#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsnd/scenario.hpp"
#include "wsnd/solver_central.hpp"

namespace wsnd {

/// Primal step run by each sensor on its own replica of lambda0. Same
/// function as the centralized closed form.
inline double local_power_update(double lambda0, const SensorParams& sensor, double U) {
  return power_closed_form(lambda0, sensor, U);
}

/// Step size eps[k]. For the lambda/k rule eps[0] is taken as lambda0[0].
double step_size(StepRule rule, double lambda0_k, int k);

/// lambda0 + eps (M mean_power - Pt), floored at lambda_min.
double dual_update(double lambda0_k, double mean_power, int M, double Pt, double eps_k,
                   double lambda_min = 1e-16);

struct TraceRow {
  int k = 0;
  double lambda0 = 0.0;      ///< sensor 0's multiplier after the update at this k
  double lambda_spread = 0.0; ///< max - min of the per-sensor multiplier replicas
  std::vector<double> p;     ///< powers produced at this k
  int consensus_iters = 0;
  double rel_step = 0.0;     ///< ||p[k] - p[k-1]|| / ||p[k-1]||; NaN at k = 1
};

struct DualAscentTrace {
  std::vector<TraceRow> rows;
  long total_consensus_rounds() const;
};

/// CSV with columns k, lambda0, p_1..p_M, consensus_iters, rel_step.
void write_trace_csv(std::ostream& os, const DualAscentTrace& trace);

struct DistributedResult {
  PowerAllocation allocation;
  DualAscentTrace trace;
};

/// Thrown when the outer loop or an inner consensus fails to converge.
class DistributedConvergenceError : public std::runtime_error {
public:
  DistributedConvergenceError(const std::string& what, DualAscentTrace trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const DualAscentTrace& trace() const { return trace_; }

private:
  DualAscentTrace trace_;
};

/// Synchronous dual ascent with average consensus on the scenario topology.
/// Every sensor holds its own multiplier and updates it from its own
/// consensus estimate of the mean power.
DistributedResult solve_distributed(const Scenario& scenario);

} // namespace wsnd
