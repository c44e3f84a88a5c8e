#pragma once

#include <cstdint>
#include <vector>

#include "wsnd/consensus.hpp"
#include "wsnd/model.hpp"

namespace wsnd {

enum class StepRule {
  /// eps[k] = lambda0[k] / k, with eps[0] = lambda0[0].
  kLambdaOverK,
};

struct SolverConfig {
  double lambda0_init = 1e-8;
  double kappa = 1e-7;
  StepRule step_rule = StepRule::kLambdaOverK;
  double lambda_min = 1e-16;
  double consensus_tol = 1e-10;
  int consensus_max_iter = 0; ///< 0 means 10 * M^2
  ConsensusStop consensus_stop = ConsensusStop::kLocalWindow;
  int consensus_window = 5;
  int outer_max_iter = 100000;
};

/// A complete, validated experiment description.
struct Scenario {
  std::vector<SensorParams> sensors;
  double U = 3.0;
  double Pt = 1.0;
  double Pfa = 0.1;
  Graph topology = Graph(1, {});
  std::uint64_t seed = 1;
  SolverConfig solver;

  int M() const { return static_cast<int>(sensors.size()); }
  int N() const { return sensors.front().samples(); }

  /// Throws UsageError when an invariant does not hold.
  void validate() const;
};

/// Per-sensor transmit powers and the budget multiplier they were solved at.
struct PowerAllocation {
  std::vector<double> p;
  double lambda0 = 0.0;

  double total() const;
};

/// p_i = Pt / M.
PowerAllocation equal_power(int sensors, double Pt);

} // namespace wsnd
