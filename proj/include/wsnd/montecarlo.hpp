#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsnd/fusion.hpp"
#include "wsnd/quantize.hpp"
#include "wsnd/scenario.hpp"

namespace wsnd {

enum class Scheme {
  kEdOptWeightsOptPower,
  kEdOptWeightsEqualPower,
  kEdEqualWeightsOptPower,
  kEdEqualWeightsEqualPower,
  kMfdOptPower,
  kMfdEqualPower,
};

std::string_view to_string(Scheme s);
/// Accepts the names produced by to_string; throws UsageError otherwise.
Scheme parse_scheme(std::string_view name);
std::vector<Scheme> all_schemes();
bool is_matched_filter(Scheme s);

/// Where the Monte Carlo decision threshold comes from.
enum class ThresholdSource {
  /// Gaussian model of the fused statistic (quantizer offset removed).
  kAnalytic,
  /// (1 - pfa) quantile of an independent H0 calibration run. Ties at the
  /// quantile (the quantized statistic has atoms) are broken by a randomized
  /// decision whose probability makes the calibration false-alarm rate exact;
  /// rates are reported as the expectation over that coin.
  kEmpirical,
};

/// Everything the fusion center needs for one detection scheme.
struct SchemeSetup {
  Scheme scheme{};
  PowerAllocation powers;
  FusionWeights weights;
  FusionMoments moments;
  std::vector<QuantSpec> quant;
};

/// Build powers, weights and moments for `scheme`; `optimal_powers` is used
/// by the *_opt_power schemes, the rest spend Pt / M each.
SchemeSetup setup_scheme(const Scenario& scenario, Scheme scheme,
                         const PowerAllocation& optimal_powers);

/// mean_h0 + Q^{-1}(pfa) sqrt(var_h0).
double detection_threshold(const FusionMoments& moments, double pfa);

struct TrialOptions {
  long trials = 10000;
  int workers = 1;
  ThresholdSource threshold = ThresholdSource::kAnalytic;
};

struct TrialDiagnostics {
  double clip_rate_h0 = 0.0; ///< fraction of transmitted statistics clipped under H0
  double clip_rate_h1 = 0.0;
  int transmitting = 0;      ///< sensors with at least one whole bit
  int zero_bit_active = 0;   ///< powered sensors whose integer bit budget is zero
  double quant_offset = 0.0; ///< analytic-model mean offset not present in the quantizer
};

/// Unquantized per-sensor statistics, trial-major (index trial * M + i).
struct RawStatistics {
  int sensors = 0;
  std::vector<double> energy;
  std::vector<double> correlation; ///< matched-filter statistic
  long trials() const { return sensors ? static_cast<long>(energy.size()) / sensors : 0; }
};

/// Raw statistics for the H0 run, the H1 run and (for empirical thresholds)
/// an independent H0 calibration run. Streams depend only on the scenario
/// seed, the run and the trial block, never on `workers`, Pt or the scheme,
/// so one RawSet can be reused across schemes and budgets.
struct RawSet {
  RawStatistics h0;
  RawStatistics h1;
  RawStatistics calibration;
};

RawSet simulate_raw(const Scenario& scenario, const TrialOptions& opts);

/// Fused statistics for independent H0 and H1 runs (and an H0 calibration
/// run when thresholds are empirical). The noise streams depend only on the
/// scenario seed and the trial block, never on the scheme or on `workers`.
struct FusedSamples {
  std::vector<double> h0;
  std::vector<double> h1;
  std::vector<double> calibration;
  TrialDiagnostics diagnostics;
};

/// Quantize and fuse raw statistics under one scheme.
FusedSamples fuse_raw(const RawSet& raw, const Scenario& scenario, const SchemeSetup& setup);

FusedSamples simulate_fused(const Scenario& scenario, const SchemeSetup& setup,
                            const TrialOptions& opts);

struct DetectionEstimate {
  Scheme scheme{};
  double pfa_target = 0.0;
  double threshold = 0.0;
  double tie_probability = 0.0; ///< randomized decision weight at the threshold atom
  double pd_hat = 0.0;
  double pfa_hat = 0.0;
  double pd_analytic = 0.0;
  long trials = 0;
  double sigma_pd = 0.0;  ///< sqrt(pd (1 - pd) / trials)
  double sigma_pfa = 0.0;
};

DetectionEstimate evaluate(const FusedSamples& samples, const SchemeSetup& setup, double pfa,
                           ThresholdSource source);

/// Empirical detection and false-alarm rates at the scenario's Pfa.
DetectionEstimate run_trials(const Scenario& scenario, const SchemeSetup& setup,
                             const TrialOptions& opts);

/// One estimate per pfa in `pfa_grid` (values in (0,1), increasing), all
/// from the same simulated statistics.
std::vector<DetectionEstimate> roc_curve(const Scenario& scenario, const SchemeSetup& setup,
                                         std::span<const double> pfa_grid,
                                         const TrialOptions& opts);

} // namespace wsnd
