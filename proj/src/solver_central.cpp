#include "wsnd/solver_central.hpp"

#include <algorithm>
#include <cmath>

#include "wsnd/errors.hpp"

namespace wsnd {

namespace {

// Coefficients of the closed form p = a / sqrt(lambda0) - c.
struct ClosedForm {
  double a;
  double c;
};

ClosedForm closed_form_coefficients(const SensorParams& s, double U) {
  const double g = s.gain();
  const double n = s.samples();
  const double s2 = s.sigma2();
  const double xi = s.xi();
  const double a = xi * U * std::sqrt(3.0) / (6.0 * s2 * (1.0 + 2.0 * xi) * std::sqrt(g));
  const double c = U * U / (6.0 * n * s2 * s2 * (1.0 + 2.0 * xi) * g) + 1.0 / g;
  return {a, c};
}

} // namespace

double objective_term(double p, const SensorParams& s, double U) {
  const double n = s.samples();
  const double s4 = s.sigma2() * s.sigma2();
  const double xi = s.xi();
  return n * n * s4 * xi * xi /
         (2.0 * n * s4 * (1.0 + 2.0 * xi) + U * U / (3.0 * (1.0 + p * s.gain())));
}

double objective_gradient(double p, const SensorParams& s, double U) {
  const double n = s.samples();
  const double s4 = s.sigma2() * s.sigma2();
  const double xi = s.xi();
  const double g = s.gain();
  const double y = 1.0 + p * g;
  const double den = 2.0 * n * s4 * (1.0 + 2.0 * xi) + U * U / (3.0 * y);
  return n * n * s4 * xi * xi / (den * den) * (U * U * g / (3.0 * y * y));
}

double power_objective(std::span<const double> p, std::span<const SensorParams> sensors,
                       double U) {
  double f = 0.0;
  for (std::size_t i = 0; i < sensors.size(); ++i) f += objective_term(p[i], sensors[i], U);
  return f;
}

double power_closed_form(double lambda0, const SensorParams& sensor, double U) {
  const auto [a, c] = closed_form_coefficients(sensor, U);
  const double x = a / std::sqrt(lambda0) - c;
  return x > 0.0 ? x : 0.0;
}

double total_power(double lambda0, std::span<const SensorParams> sensors, double U) {
  double sum = 0.0;
  for (const auto& s : sensors) sum += power_closed_form(lambda0, s, U);
  return sum;
}

PowerAllocation solve_centralized(std::span<const SensorParams> sensors, double U, double Pt) {
  if (sensors.empty()) throw UsageError("solve_centralized: no sensors");
  if (!(Pt > 0.0)) throw UsageError("solve_centralized: Pt must be positive");
  if (std::all_of(sensors.begin(), sensors.end(), [](const auto& s) { return s.xi() == 0.0; })) {
    throw NoSignalError("solve_centralized: every sensor has zero SNR");
  }

  // Total power decreases from +inf (lambda0 -> 0) to 0 (lambda0 -> inf).
  double lo = 1.0;
  double hi = 1.0;
  while (total_power(lo, sensors, U) <= Pt) lo *= 0.5;
  while (total_power(hi, sensors, U) >= Pt) hi *= 2.0;

  const double tol = 1e-9 * Pt;
  double lambda = std::sqrt(lo * hi);
  for (int it = 0; it < 400; ++it) {
    lambda = std::sqrt(lo * hi);
    const double total = total_power(lambda, sensors, U);
    if (std::abs(total - Pt) <= tol) break;
    (total > Pt ? lo : hi) = lambda;
  }

  // With the active set known the budget equation is linear in 1/sqrt(lambda0):
  // sum_active (a_i t - c_i) = Pt. Solve it exactly and keep it if the active
  // set is unchanged.
  double sum_a = 0.0;
  double sum_c = 0.0;
  std::vector<char> active(sensors.size());
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    active[i] = power_closed_form(lambda, sensors[i], U) > 0.0;
    if (active[i]) {
      const auto [a, c] = closed_form_coefficients(sensors[i], U);
      sum_a += a;
      sum_c += c;
    }
  }
  if (sum_a > 0.0) {
    const double t = (Pt + sum_c) / sum_a;
    const double refined = 1.0 / (t * t);
    bool same = true;
    for (std::size_t i = 0; i < sensors.size(); ++i) {
      same = same && ((power_closed_form(refined, sensors[i], U) > 0.0) == bool(active[i]));
    }
    if (same) lambda = refined;
  }

  PowerAllocation out;
  out.lambda0 = lambda;
  out.p.reserve(sensors.size());
  for (const auto& s : sensors) out.p.push_back(power_closed_form(lambda, s, U));
  return out;
}

PowerAllocation solve_centralized(const Scenario& scenario) {
  return solve_centralized(scenario.sensors, scenario.U, scenario.Pt);
}

KktReport kkt_check(const PowerAllocation& alloc, std::span<const SensorParams> sensors,
                    double U, double Pt) {
  if (alloc.p.size() != sensors.size()) throw UsageError("kkt_check: length mismatch");
  KktReport r;
  r.stationarity_residuals.resize(sensors.size());
  r.implied_mu.resize(sensors.size());
  bool nonneg = true;
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const double p = alloc.p[i];
    nonneg = nonneg && p >= 0.0;
    const double grad = objective_gradient(std::max(p, 0.0), sensors[i], U) - alloc.lambda0;
    if (p > 0.0) {
      r.stationarity_residuals[i] = grad;
      r.max_abs_residual_active = std::max(r.max_abs_residual_active, std::abs(grad));
    } else {
      r.implied_mu[i] = std::max(0.0, -grad);
      r.stationarity_residuals[i] = grad + r.implied_mu[i];
      r.max_abs_residual_inactive =
          std::max(r.max_abs_residual_inactive, std::abs(r.stationarity_residuals[i]));
    }
  }
  const double total = alloc.total();
  r.slackness = std::abs(alloc.lambda0 * (total - Pt));
  r.primal_feasible = nonneg && total <= Pt + 1e-9;
  r.dual_feasible = alloc.lambda0 >= 0.0;
  return r;
}

KktReport kkt_check(const PowerAllocation& alloc, const Scenario& scenario) {
  return kkt_check(alloc, scenario.sensors, scenario.U, scenario.Pt);
}

} // namespace wsnd
