#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace wsnd {

/// Generator used everywhere. Seeded only through make_stream() so that every
/// draw is reproducible from (scenario seed, stream tags).
using Rng = std::mt19937_64;

/// Derive an independent stream from a base seed and up to two tags
/// (e.g. purpose and block index) via std::seed_seq.
Rng make_stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0);

enum class Hypothesis { H0, H1 };

/// Ground truth for one sensor node.
///
/// `xi` is derived from `signal` and `sigma2` at construction and is the
/// effective observed SNR, sum(s^2) / (N sigma2).
class SensorParams {
public:
  /// Throws UsageError on non-positive sigma2/h/zeta or an empty signal.
  SensorParams(double sigma2, double h, double zeta, std::vector<double> signal);

  double sigma2() const { return sigma2_; }
  double xi() const { return xi_; }
  double h() const { return h_; }
  double zeta() const { return zeta_; }
  /// Channel-to-noise ratio h^2 / zeta.
  double gain() const { return h_ * h_ / zeta_; }
  std::span<const double> signal() const { return signal_; }
  int samples() const { return static_cast<int>(signal_.size()); }
  double signal_energy() const { return signal_energy_; }

  /// Copy with the signal multiplied by `factor` (xi scales by factor^2).
  SensorParams with_scaled_signal(double factor) const;

private:
  double sigma2_;
  double h_;
  double zeta_;
  std::vector<double> signal_;
  double signal_energy_;
  double xi_;
};

struct StatisticMoments {
  double mean_h0;
  double var_h0;
  double mean_h1;
  double var_h1;
};

/// Fill `out` (length N) with one observation block under `hyp`.
void generate_observations(const SensorParams& sensor, Hypothesis hyp, Rng& rng,
                           std::span<double> out);
std::vector<double> generate_observations(const SensorParams& sensor, Hypothesis hyp,
                                          Rng& rng);

/// Sum of squares. Throws UsageError on an empty sequence.
double energy_statistic(std::span<const double> x);

/// Gaussian moments of the energy statistic under both hypotheses.
StatisticMoments statistic_moments(const SensorParams& sensor);

/// 10 log10 of the mean xi across sensors.
double average_snr_db(std::span<const SensorParams> sensors);

/// Rescale every signal by one common factor so average_snr_db hits the target.
/// Ratios xi_i / xi_j are preserved. Throws UsageError if all signals are zero.
std::vector<SensorParams> calibrate_average_snr(std::span<const SensorParams> sensors,
                                                double target_xa_db);

enum class ChannelModel {
  kRayleigh, ///< h = |CN(0,1)|
  kUnit,     ///< h = 1 for every sensor
};

/// Parameters for drawing a heterogeneous sensor population.
struct PopulationSpec {
  int sensors = 10;
  int samples = 10;
  double signal_amplitude = 0.2; ///< constant s_i(n) before calibration
  double xi_a_db = -4.0;
  double zeta = 0.1;
  double sigma2_min = 0.5; ///< sigma_i^2 is log-uniform in [min, max]
  double sigma2_max = 2.0;
  ChannelModel channel = ChannelModel::kRayleigh;
};

/// Draw sigma_i^2 log-uniform and h_i Rayleigh (|CN(0,1)|) from `rng`, build
/// constant signals and calibrate to the target average SNR.
std::vector<SensorParams> draw_population(const PopulationSpec& spec, Rng& rng);

} // namespace wsnd
