#pragma once

namespace wsnd {

/// Bit budget and noise model for one sensor at a given transmit power.
struct QuantSpec {
  double bits_real = 0.0; ///< capacity-matched L_i (equality in the capacity bound)
  int bits_int = 0;       ///< floor(bits_real); what the sample-path quantizer uses
  double noise_var = 0.0; ///< U^2 / (3 * 4^bits_real)
  bool censored = true;   ///< power was zero
};

/// 0.5 * log2(1 + p h^2 / zeta).
double capacity_bits(double p, double h, double zeta);

/// U^2 / (3 (1 + p h^2 / zeta)), i.e. the uniform-noise variance at
/// capacity-matched bits.
double quant_noise_var(double p, double h, double zeta, double U);

QuantSpec make_quant_spec(double p, double h, double zeta, double U);

/// Midrise uniform quantizer with 2^bits cells over [lo, lo + 2U]; the
/// input is clipped to that range first. Throws UsageError for zero bits.
double quantize_uniform(double t, int bits, double lo, double U);

/// Quantize an energy statistic, domain [0, 2U]. Censored or zero-bit specs
/// throw UsageError; the caller is expected to drop such sensors.
double quantize_statistic(double t, const QuantSpec& spec, double U);

} // namespace wsnd
