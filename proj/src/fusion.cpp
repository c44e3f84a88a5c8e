#include "wsnd/fusion.hpp"

#include <cmath>

#include "wsnd/errors.hpp"
#include "wsnd/qfunc.hpp"
#include "wsnd/quantize.hpp"

namespace wsnd {

namespace {

void check_sizes(const Scenario& scenario, const FusionWeights& weights,
                 const PowerAllocation& powers) {
  const auto m = scenario.sensors.size();
  if (weights.alpha.size() != m || powers.p.size() != m) {
    throw UsageError("fusion: weights/powers length differs from sensor count");
  }
}

} // namespace

FusionMoments FusionMoments::without_quant_offset() const {
  FusionMoments m = *this;
  m.mean_h0 -= quant_offset;
  m.mean_h1 -= quant_offset;
  m.quant_offset = 0.0;
  return m;
}

std::vector<std::uint8_t> censor_mask(const PowerAllocation& powers) {
  std::vector<std::uint8_t> mask(powers.p.size());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = powers.p[i] > 0.0 ? 0 : 1;
  return mask;
}

double fuse(std::span<const double> t_hat, std::span<const std::uint8_t> censored,
            const FusionWeights& weights) {
  if (t_hat.size() != weights.alpha.size() || censored.size() != weights.alpha.size()) {
    throw UsageError("fuse: length mismatch");
  }
  double t = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < t_hat.size(); ++i) {
    if (censored[i]) {
      if (weights.alpha[i] != 0.0) throw UsageError("fuse: censored sensor has nonzero weight");
      continue;
    }
    any = true;
    t += weights.alpha[i] * t_hat[i];
  }
  if (!any) throw DegenerateFusionError("fuse: every sensor is censored");
  return t;
}

FusionMoments fusion_moments(const Scenario& scenario, const FusionWeights& weights,
                             const PowerAllocation& powers) {
  check_sizes(scenario, weights, powers);
  FusionMoments m;
  for (std::size_t i = 0; i < scenario.sensors.size(); ++i) {
    if (!(powers.p[i] > 0.0)) continue;
    const auto& s = scenario.sensors[i];
    const double a = weights.alpha[i];
    const double n = s.samples();
    const double s4 = s.sigma2() * s.sigma2();
    const double v = quant_noise_var(powers.p[i], s.h(), s.zeta(), scenario.U);
    m.mean_h0 += a * (n * s.sigma2() + scenario.U);
    m.mean_h1 += a * (n * s.sigma2() * (1.0 + s.xi()) + scenario.U);
    m.var_h0 += a * a * (2.0 * n * s4 + v);
    m.var_h1 += a * a * (2.0 * n * s4 * (1.0 + 2.0 * s.xi()) + v);
    m.psi += a * n * s.sigma2() * s.xi();
    m.quant_offset += a * scenario.U;
  }
  return m;
}

double analytic_pd(const FusionMoments& moments, double pfa) {
  if (!(moments.var_h0 > 0.0) || !(moments.var_h1 > 0.0)) {
    throw UsageError("analytic_pd: variances must be positive");
  }
  if (moments.psi == 0.0 && moments.var_h0 == moments.var_h1) return pfa;
  return q_function((q_inverse(pfa) * std::sqrt(moments.var_h0) - moments.psi) /
                    std::sqrt(moments.var_h1));
}

DeflectionInputs deflection_inputs(const Scenario& scenario, const PowerAllocation& powers) {
  const auto m = scenario.sensors.size();
  if (powers.p.size() != m) throw UsageError("deflection_inputs: powers length mismatch");
  DeflectionInputs in;
  in.b.resize(m);
  in.R_diag.resize(m);
  in.censored = censor_mask(powers);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& s = scenario.sensors[i];
    const double n = s.samples();
    const double v = quant_noise_var(powers.p[i], s.h(), s.zeta(), scenario.U);
    in.b[i] = n * s.sigma2() * s.xi();
    in.R_diag[i] = 2.0 * n * (s.sigma2() * s.sigma2() * (1.0 + 2.0 * s.xi()) + v / (2.0 * n));
  }
  return in;
}

double deflection(const FusionWeights& weights, const DeflectionInputs& inputs) {
  if (weights.alpha.size() != inputs.b.size()) throw UsageError("deflection: length mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < inputs.b.size(); ++i) {
    const double a = weights.alpha[i];
    num += inputs.b[i] * a;
    den += a * a * inputs.R_diag[i];
  }
  if (den == 0.0) throw UsageError("deflection: weights are all zero");
  return num * num / den;
}

FusionWeights optimal_weights(const DeflectionInputs& inputs) {
  FusionWeights w;
  w.alpha.resize(inputs.b.size());
  for (std::size_t i = 0; i < inputs.b.size(); ++i) {
    if (!(inputs.R_diag[i] > 0.0)) throw UsageError("optimal_weights: R must be positive");
    const bool cut = !inputs.censored.empty() && inputs.censored[i];
    w.alpha[i] = cut ? 0.0 : inputs.b[i] / inputs.R_diag[i];
  }
  return w;
}

double max_deflection(const DeflectionInputs& inputs) {
  double d = 0.0;
  for (std::size_t i = 0; i < inputs.b.size(); ++i) {
    if (!inputs.censored.empty() && inputs.censored[i]) continue;
    d += inputs.b[i] * inputs.b[i] / inputs.R_diag[i];
  }
  return d;
}

FusionWeights equal_weights(const PowerAllocation& powers) {
  const double a = 1.0 / std::sqrt(static_cast<double>(powers.p.size()));
  FusionWeights w;
  w.alpha.reserve(powers.p.size());
  for (double p : powers.p) w.alpha.push_back(p > 0.0 ? a : 0.0);
  return w;
}

double matched_filter_statistic(std::span<const double> x, const SensorParams& sensor) {
  const auto s = sensor.signal();
  if (x.size() != s.size()) throw UsageError("matched_filter_statistic: length mismatch");
  if (sensor.signal_energy() == 0.0) {
    throw UsageError("matched_filter_statistic: signal is identically zero");
  }
  double t = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) t += x[n] * s[n];
  return t;
}

FusionWeights matched_filter_weights(const Scenario& scenario, const PowerAllocation& powers) {
  const auto m = scenario.sensors.size();
  if (powers.p.size() != m) throw UsageError("matched_filter_weights: powers length mismatch");
  FusionWeights w;
  w.alpha.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& s = scenario.sensors[i];
    if (s.signal_energy() == 0.0) {
      throw UsageError("matched_filter_weights: signal is identically zero");
    }
    if (!(powers.p[i] > 0.0)) continue;
    const double v = quant_noise_var(powers.p[i], s.h(), s.zeta(), scenario.U);
    w.alpha[i] = s.signal_energy() / (s.sigma2() * s.signal_energy() + v);
  }
  return w;
}

FusionMoments matched_filter_moments(const Scenario& scenario, const FusionWeights& weights,
                                     const PowerAllocation& powers) {
  check_sizes(scenario, weights, powers);
  FusionMoments m;
  for (std::size_t i = 0; i < scenario.sensors.size(); ++i) {
    if (!(powers.p[i] > 0.0)) continue;
    const auto& s = scenario.sensors[i];
    const double a = weights.alpha[i];
    const double v = quant_noise_var(powers.p[i], s.h(), s.zeta(), scenario.U);
    const double var = a * a * (s.sigma2() * s.signal_energy() + v);
    m.mean_h1 += a * s.signal_energy();
    m.var_h0 += var;
    m.var_h1 += var;
  }
  m.psi = m.mean_h1 - m.mean_h0;
  return m;
}

} // namespace wsnd
