#pragma once

#include <span>
#include <vector>

#include "wsnd/scenario.hpp"

namespace wsnd {

/// Per-sensor term of the power objective after substituting the optimal
/// weights: N^2 sigma^4 xi^2 / (2N sigma^4 (1+2xi) + U^2 / (3(1 + p g))).
double objective_term(double p, const SensorParams& sensor, double U);

/// d objective_term / dp.
double objective_gradient(double p, const SensorParams& sensor, double U);

/// Sum of objective_term over sensors.
double power_objective(std::span<const double> p, std::span<const SensorParams> sensors,
                       double U);

/// Maximizer of objective_term(p) - lambda0 p over p >= 0:
///   [ A / sqrt(lambda0) - U^2 / (6 N sigma^4 (1+2xi) g) - 1/g ]^+
/// with A = xi U sqrt(3) / (6 sigma^2 (1+2xi) sqrt(g)), g = h^2 / zeta.
/// Uses only sensor-local quantities.
double power_closed_form(double lambda0, const SensorParams& sensor, double U);

double total_power(double lambda0, std::span<const SensorParams> sensors, double U);

/// Water-filling: find lambda0 such that the closed-form powers spend the
/// budget (to 1e-9 relative). Throws NoSignalError when every xi is zero.
PowerAllocation solve_centralized(std::span<const SensorParams> sensors, double U, double Pt);
PowerAllocation solve_centralized(const Scenario& scenario);

struct KktReport {
  /// Stationarity expression with the implied mu_i; zero at an exact KKT point.
  std::vector<double> stationarity_residuals;
  /// mu_i = max(0, lambda0 - gradient_i(0)) for inactive sensors, 0 otherwise.
  std::vector<double> implied_mu;
  double max_abs_residual_active = 0.0;
  double max_abs_residual_inactive = 0.0;
  double slackness = 0.0; ///< |lambda0 (sum p - Pt)|
  bool primal_feasible = false;
  bool dual_feasible = false;
};

KktReport kkt_check(const PowerAllocation& alloc, std::span<const SensorParams> sensors,
                    double U, double Pt);
KktReport kkt_check(const PowerAllocation& alloc, const Scenario& scenario);

} // namespace wsnd
