#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wsnd/scenario.hpp"

namespace wsnd {

/// Linear combining coefficients at the fusion center. Censored sensors
/// carry exactly zero.
struct FusionWeights {
  std::vector<double> alpha;
};

/// Gaussian model of the fused statistic.
///
/// The means include the +U per-sensor quantizer offset of the analytic model
/// (`quant_offset` = U * sum alpha); it cancels in psi. The sample-path
/// quantizer is midrise and therefore approximately unbiased, so Monte Carlo
/// thresholds are calibrated on `without_quant_offset()`.
struct FusionMoments {
  double mean_h0 = 0.0;
  double var_h0 = 0.0;
  double mean_h1 = 0.0;
  double var_h1 = 0.0;
  double psi = 0.0;
  double quant_offset = 0.0;

  FusionMoments without_quant_offset() const;
};

/// b_i = N sigma_i^2 xi_i and the diagonal of R, with an optional mask of
/// censored sensors that the weight rule must zero.
struct DeflectionInputs {
  std::vector<double> b;
  std::vector<double> R_diag;
  std::vector<std::uint8_t> censored;
};

/// Mask with 1 where p_i == 0.
std::vector<std::uint8_t> censor_mask(const PowerAllocation& powers);

/// sum over non-censored i of alpha_i * t_hat_i. Throws UsageError if a
/// censored sensor has a nonzero weight and DegenerateFusionError if every
/// sensor is censored.
double fuse(std::span<const double> t_hat, std::span<const std::uint8_t> censored,
            const FusionWeights& weights);

/// Moments of the fused energy statistic for the given weights and powers.
FusionMoments fusion_moments(const Scenario& scenario, const FusionWeights& weights,
                             const PowerAllocation& powers);

/// Q((Q^{-1}(pfa) sqrt(var_h0) - psi) / sqrt(var_h1)).
double analytic_pd(const FusionMoments& moments, double pfa);

DeflectionInputs deflection_inputs(const Scenario& scenario, const PowerAllocation& powers);

/// Modified deflection (b^T a)^2 / (a^T R a). Throws UsageError for all-zero weights.
double deflection(const FusionWeights& weights, const DeflectionInputs& inputs);

/// alpha_i = b_i / R_ii (zero where censored). Unnormalized.
FusionWeights optimal_weights(const DeflectionInputs& inputs);

/// sum_i b_i^2 / R_ii over non-censored sensors: the largest eigenvalue of
/// the rank-one matrix R^{-1/2} b b^T R^{-1/2}.
double max_deflection(const DeflectionInputs& inputs);

/// alpha_i = 1 / sqrt(M) for every non-censored sensor.
FusionWeights equal_weights(const PowerAllocation& powers);

/// sum_n x(n) s(n). Throws UsageError if the sensor's signal is all zero.
double matched_filter_statistic(std::span<const double> x, const SensorParams& sensor);

/// alpha_i = E_s / (sigma^2 E_s + sigma_v^2), E_s = sum s^2; zero where censored.
FusionWeights matched_filter_weights(const Scenario& scenario, const PowerAllocation& powers);

/// Gaussian moments of the fused matched-filter statistic.
FusionMoments matched_filter_moments(const Scenario& scenario, const FusionWeights& weights,
                                     const PowerAllocation& powers);

} // namespace wsnd
