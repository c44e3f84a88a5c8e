#pragma once

#include <cmath>
#include <vector>

#include "wsnd/model.hpp"
#include "wsnd/scenario.hpp"

namespace wsnd::testing {

/// Sensor with a constant signal chosen so that the SNR equals `xi`.
inline SensorParams make_sensor(double sigma2, double xi, double h, double zeta, int n) {
  return SensorParams(sigma2, h, zeta, std::vector<double>(n, std::sqrt(xi * sigma2)));
}

inline Scenario make_scenario(std::vector<SensorParams> sensors, double U, double Pt,
                              double Pfa = 0.1) {
  Scenario sc;
  const int m = static_cast<int>(sensors.size());
  sc.sensors = std::move(sensors);
  sc.U = U;
  sc.Pt = Pt;
  sc.Pfa = Pfa;
  sc.topology = Graph::complete(m);
  return sc;
}

/// Maximizer on [lo, hi] of a concave function given its derivative, by
/// bisection on the sign of the derivative.
template <typename D>
double concave_argmax(D&& deriv, double lo, double hi) {
  if (deriv(lo) <= 0.0) return lo;
  if (deriv(hi) >= 0.0) return hi;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (deriv(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace wsnd::testing
