#include "wsnd/scenario.hpp"

#include <numeric>

#include "wsnd/errors.hpp"

namespace wsnd {

void Scenario::validate() const {
  if (sensors.empty()) throw UsageError("Scenario: no sensors");
  const int n = sensors.front().samples();
  for (const auto& s : sensors) {
    if (s.samples() != n) throw UsageError("Scenario: sensors disagree on sample count");
  }
  if (topology.vertices() != M()) {
    throw UsageError("Scenario: topology vertex count differs from sensor count");
  }
  if (!(U > 0.0)) throw UsageError("Scenario: U must be positive");
  if (!(Pt > 0.0)) throw UsageError("Scenario: Pt must be positive");
  if (!(Pfa > 0.0 && Pfa < 1.0)) throw UsageError("Scenario: Pfa must lie in (0,1)");
  if (!(solver.lambda0_init > 0.0) || !(solver.kappa > 0.0) || !(solver.consensus_tol > 0.0) ||
      !(solver.lambda_min > 0.0)) {
    throw UsageError("Scenario: solver constants must be positive");
  }
  if (solver.outer_max_iter < 1 || solver.consensus_max_iter < 0 || solver.consensus_window < 1) {
    throw UsageError("Scenario: solver iteration caps must be positive");
  }
}

double PowerAllocation::total() const { return std::accumulate(p.begin(), p.end(), 0.0); }

PowerAllocation equal_power(int sensors, double Pt) {
  return {std::vector<double>(sensors, Pt / sensors), 0.0};
}

} // namespace wsnd
