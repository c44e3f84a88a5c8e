#include "wsnd/model.hpp"

#include <cmath>
#include <numeric>

#include "wsnd/errors.hpp"

namespace wsnd {

Rng make_stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

SensorParams::SensorParams(double sigma2, double h, double zeta, std::vector<double> signal)
    : sigma2_(sigma2), h_(h), zeta_(zeta), signal_(std::move(signal)) {
  if (!(sigma2_ > 0.0) || !(h_ > 0.0) || !(zeta_ > 0.0)) {
    throw UsageError("SensorParams: sigma2, h and zeta must be strictly positive");
  }
  if (signal_.empty()) {
    throw UsageError("SensorParams: signal must have at least one sample");
  }
  signal_energy_ = std::inner_product(signal_.begin(), signal_.end(), signal_.begin(), 0.0);
  xi_ = signal_energy_ / (static_cast<double>(signal_.size()) * sigma2_);
}

SensorParams SensorParams::with_scaled_signal(double factor) const {
  std::vector<double> s(signal_);
  for (double& v : s) v *= factor;
  return SensorParams(sigma2_, h_, zeta_, std::move(s));
}

void generate_observations(const SensorParams& sensor, Hypothesis hyp, Rng& rng,
                           std::span<double> out) {
  std::normal_distribution<double> noise(0.0, std::sqrt(sensor.sigma2()));
  const auto s = sensor.signal();
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = noise(rng);
    if (hyp == Hypothesis::H1) out[n] += s[n];
  }
}

std::vector<double> generate_observations(const SensorParams& sensor, Hypothesis hyp,
                                          Rng& rng) {
  std::vector<double> x(sensor.signal().size());
  generate_observations(sensor, hyp, rng, x);
  return x;
}

double energy_statistic(std::span<const double> x) {
  if (x.empty()) throw UsageError("energy_statistic: empty sequence");
  double t = 0.0;
  for (double v : x) t += v * v;
  return t;
}

StatisticMoments statistic_moments(const SensorParams& sensor) {
  const double n = sensor.samples();
  const double s2 = sensor.sigma2();
  const double xi = sensor.xi();
  return {n * s2, 2.0 * n * s2 * s2, n * s2 * (1.0 + xi), 2.0 * n * s2 * s2 * (1.0 + 2.0 * xi)};
}

double average_snr_db(std::span<const SensorParams> sensors) {
  double sum = 0.0;
  for (const auto& s : sensors) sum += s.xi();
  return 10.0 * std::log10(sum / static_cast<double>(sensors.size()));
}

std::vector<SensorParams> calibrate_average_snr(std::span<const SensorParams> sensors,
                                                double target_xa_db) {
  if (sensors.empty()) throw UsageError("calibrate_average_snr: no sensors");
  double mean_xi = 0.0;
  for (const auto& s : sensors) mean_xi += s.xi();
  mean_xi /= static_cast<double>(sensors.size());
  if (!(mean_xi > 0.0)) {
    throw UsageError("calibrate_average_snr: all signals are zero, cannot calibrate");
  }
  const double factor = std::sqrt(std::pow(10.0, target_xa_db / 10.0) / mean_xi);
  std::vector<SensorParams> out;
  out.reserve(sensors.size());
  for (const auto& s : sensors) out.push_back(s.with_scaled_signal(factor));
  return out;
}

std::vector<SensorParams> draw_population(const PopulationSpec& spec, Rng& rng) {
  if (spec.sensors < 1 || spec.samples < 1) {
    throw UsageError("draw_population: need at least one sensor and one sample");
  }
  if (!(spec.sigma2_min > 0.0) || spec.sigma2_max < spec.sigma2_min) {
    throw UsageError("draw_population: invalid sigma2 range");
  }
  std::uniform_real_distribution<double> log_sigma(std::log(spec.sigma2_min),
                                                   std::log(spec.sigma2_max));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<SensorParams> raw;
  raw.reserve(spec.sensors);
  for (int i = 0; i < spec.sensors; ++i) {
    const double sigma2 = std::exp(log_sigma(rng));
    const double re = gauss(rng);
    const double im = gauss(rng);
    const double h = spec.channel == ChannelModel::kUnit ? 1.0 : std::sqrt(0.5 * (re * re + im * im));
    raw.emplace_back(sigma2, h, spec.zeta,
                     std::vector<double>(spec.samples, spec.signal_amplitude));
  }
  return calibrate_average_snr(raw, spec.xi_a_db);
}

} // namespace wsnd
