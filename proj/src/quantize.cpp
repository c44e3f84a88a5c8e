#include "wsnd/quantize.hpp"

#include <algorithm>
#include <cmath>

#include "wsnd/errors.hpp"

namespace wsnd {

double capacity_bits(double p, double h, double zeta) {
  if (p <= 0.0) return 0.0;
  return 0.5 * std::log2(1.0 + p * h * h / zeta);
}

double quant_noise_var(double p, double h, double zeta, double U) {
  return U * U / (3.0 * (1.0 + std::max(p, 0.0) * h * h / zeta));
}

QuantSpec make_quant_spec(double p, double h, double zeta, double U) {
  QuantSpec q;
  q.censored = !(p > 0.0);
  q.bits_real = capacity_bits(p, h, zeta);
  q.bits_int = static_cast<int>(std::floor(q.bits_real));
  q.noise_var = quant_noise_var(p, h, zeta, U);
  return q;
}

double quantize_uniform(double t, int bits, double lo, double U) {
  if (bits < 1) throw UsageError("quantize_uniform: need at least one bit");
  // Beyond ~52 bits the cells fall below double resolution anyway.
  const int b = std::min(bits, 52);
  const double levels = std::ldexp(1.0, b);
  const double width = 2.0 * U / levels;
  const double clipped = std::clamp(t, lo, lo + 2.0 * U);
  const double cell = std::min(std::floor((clipped - lo) / width), levels - 1.0);
  return lo + (cell + 0.5) * width;
}

double quantize_statistic(double t, const QuantSpec& spec, double U) {
  if (spec.censored || spec.bits_int < 1) {
    throw UsageError("quantize_statistic: sensor is censored or has zero bits");
  }
  return quantize_uniform(t, spec.bits_int, 0.0, U);
}

} // namespace wsnd
