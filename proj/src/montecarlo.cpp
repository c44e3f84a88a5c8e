#include "wsnd/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

#include "wsnd/errors.hpp"
#include "wsnd/qfunc.hpp"

namespace wsnd {

namespace {

constexpr std::array<std::pair<Scheme, std::string_view>, 6> kSchemeNames{{
    {Scheme::kEdOptWeightsOptPower, "ED_opt_weights_opt_power"},
    {Scheme::kEdOptWeightsEqualPower, "ED_opt_weights_equal_power"},
    {Scheme::kEdEqualWeightsOptPower, "ED_equal_weights_opt_power"},
    {Scheme::kEdEqualWeightsEqualPower, "ED_equal_weights_equal_power"},
    {Scheme::kMfdOptPower, "MFD_opt_power"},
    {Scheme::kMfdEqualPower, "MFD_equal_power"},
}};

constexpr long kBlockTrials = 2048;
constexpr std::uint64_t kTagH0 = 0x4830;
constexpr std::uint64_t kTagH1 = 0x4831;
constexpr std::uint64_t kTagCalibration = 0x4843;

bool uses_optimal_power(Scheme s) {
  return s == Scheme::kEdOptWeightsOptPower || s == Scheme::kEdEqualWeightsOptPower ||
         s == Scheme::kMfdOptPower;
}

// Fill raw statistics for the trials of one block.
void simulate_block(const Scenario& sc, Hypothesis hyp, std::uint64_t tag, long block,
                    std::span<double> energy, std::span<double> corr) {
  Rng rng = make_stream(sc.seed, tag, static_cast<std::uint64_t>(block));
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int m = sc.M();
  const int n = sc.N();
  std::vector<double> sd(m);
  for (int i = 0; i < m; ++i) sd[i] = std::sqrt(sc.sensors[i].sigma2());

  for (std::size_t idx = 0; idx < energy.size(); ++idx) {
    const int i = static_cast<int>(idx % m);
    const auto sig = sc.sensors[i].signal();
    double e = 0.0;
    double c = 0.0;
    for (int k = 0; k < n; ++k) {
      double x = sd[i] * gauss(rng);
      if (hyp == Hypothesis::H1) x += sig[k];
      e += x * x;
      c += x * sig[k];
    }
    energy[idx] = e;
    corr[idx] = c;
  }
}

RawStatistics simulate_run(const Scenario& sc, Hypothesis hyp, std::uint64_t tag, long trials,
                           int workers) {
  const int m = sc.M();
  RawStatistics raw;
  raw.sensors = m;
  raw.energy.resize(static_cast<std::size_t>(trials) * m);
  raw.correlation.resize(raw.energy.size());
  const long blocks = (trials + kBlockTrials - 1) / kBlockTrials;
  auto work = [&](int w, int nworkers) {
    for (long b = w; b < blocks; b += nworkers) {
      const long begin = b * kBlockTrials * m;
      const long len = (std::min(trials, (b + 1) * kBlockTrials) - b * kBlockTrials) * m;
      simulate_block(sc, hyp, tag, b, std::span<double>(raw.energy).subspan(begin, len),
                     std::span<double>(raw.correlation).subspan(begin, len));
    }
  };
  const int nworkers = static_cast<int>(std::clamp<long>(workers, 1, blocks));
  if (nworkers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(work, w, nworkers);
  }
  return raw;
}

std::vector<double> fuse_run(const RawStatistics& raw, const Scenario& sc,
                             const SchemeSetup& setup, double* clip_rate) {
  const bool mf = is_matched_filter(setup.scheme);
  const auto& stats = mf ? raw.correlation : raw.energy;
  const double lo = mf ? -sc.U : 0.0;
  const double hi = lo + 2.0 * sc.U;
  const int m = raw.sensors;
  const long trials = raw.trials();
  std::vector<double> out(trials, 0.0);
  long clipped = 0;
  long transmitted = 0;
  for (int i = 0; i < m; ++i) {
    const auto& q = setup.quant[i];
    if (q.censored || q.bits_int < 1) continue;
    const double a = setup.weights.alpha[i];
    for (long t = 0; t < trials; ++t) {
      const double v = stats[static_cast<std::size_t>(t) * m + i];
      clipped += (v < lo || v > hi);
      out[t] += a * quantize_uniform(v, q.bits_int, lo, sc.U);
    }
    transmitted += trials;
  }
  if (clip_rate) *clip_rate = transmitted ? double(clipped) / double(transmitted) : 0.0;
  return out;
}

double binomial_sigma(double p, long trials) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

// Rate of deciding H1: P(T > threshold) + tie * P(T == threshold).
double decision_rate(const std::vector<double>& v, double threshold, double tie) {
  long above = 0;
  long equal = 0;
  for (double x : v) {
    above += x > threshold;
    equal += x == threshold;
  }
  return (static_cast<double>(above) + tie * static_cast<double>(equal)) /
         static_cast<double>(v.size());
}

} // namespace

std::string_view to_string(Scheme s) {
  for (const auto& [k, name] : kSchemeNames)
    if (k == s) return name;
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (const auto& [k, n] : kSchemeNames)
    if (n == name) return k;
  throw UsageError("unknown scheme '" + std::string(name) + "'");
}

std::vector<Scheme> all_schemes() {
  std::vector<Scheme> v;
  for (const auto& [k, name] : kSchemeNames) v.push_back(k);
  return v;
}

bool is_matched_filter(Scheme s) { return s == Scheme::kMfdOptPower || s == Scheme::kMfdEqualPower; }

SchemeSetup setup_scheme(const Scenario& scenario, Scheme scheme,
                         const PowerAllocation& optimal_powers) {
  SchemeSetup setup;
  setup.scheme = scheme;
  setup.powers = uses_optimal_power(scheme) ? optimal_powers : equal_power(scenario.M(), scenario.Pt);
  if (static_cast<int>(setup.powers.p.size()) != scenario.M()) {
    throw UsageError("setup_scheme: power vector length differs from sensor count");
  }
  if (std::none_of(setup.powers.p.begin(), setup.powers.p.end(), [](double p) { return p > 0.0; })) {
    throw DegenerateFusionError("setup_scheme: every sensor is censored");
  }
  switch (scheme) {
  case Scheme::kEdOptWeightsOptPower:
  case Scheme::kEdOptWeightsEqualPower:
    setup.weights = optimal_weights(deflection_inputs(scenario, setup.powers));
    break;
  case Scheme::kEdEqualWeightsOptPower:
  case Scheme::kEdEqualWeightsEqualPower:
    setup.weights = equal_weights(setup.powers);
    break;
  case Scheme::kMfdOptPower:
  case Scheme::kMfdEqualPower:
    setup.weights = matched_filter_weights(scenario, setup.powers);
    break;
  }
  setup.moments = is_matched_filter(scheme)
                      ? matched_filter_moments(scenario, setup.weights, setup.powers)
                      : fusion_moments(scenario, setup.weights, setup.powers);
  for (int i = 0; i < scenario.M(); ++i) {
    const auto& s = scenario.sensors[i];
    setup.quant.push_back(make_quant_spec(setup.powers.p[i], s.h(), s.zeta(), scenario.U));
  }
  return setup;
}

double detection_threshold(const FusionMoments& moments, double pfa) {
  if (!(moments.var_h0 > 0.0)) throw UsageError("detection_threshold: var_h0 must be positive");
  return moments.mean_h0 + q_inverse(pfa) * std::sqrt(moments.var_h0);
}

RawSet simulate_raw(const Scenario& scenario, const TrialOptions& opts) {
  if (opts.trials < 1) throw UsageError("simulate_raw: need at least one trial");
  RawSet raw;
  raw.h0 = simulate_run(scenario, Hypothesis::H0, kTagH0, opts.trials, opts.workers);
  raw.h1 = simulate_run(scenario, Hypothesis::H1, kTagH1, opts.trials, opts.workers);
  if (opts.threshold == ThresholdSource::kEmpirical) {
    raw.calibration =
        simulate_run(scenario, Hypothesis::H0, kTagCalibration, opts.trials, opts.workers);
  }
  return raw;
}

FusedSamples fuse_raw(const RawSet& raw, const Scenario& scenario, const SchemeSetup& setup) {
  if (raw.h0.sensors != scenario.M()) throw UsageError("fuse_raw: sensor count mismatch");
  FusedSamples out;
  out.h0 = fuse_run(raw.h0, scenario, setup, &out.diagnostics.clip_rate_h0);
  out.h1 = fuse_run(raw.h1, scenario, setup, &out.diagnostics.clip_rate_h1);
  if (raw.calibration.sensors) {
    out.calibration = fuse_run(raw.calibration, scenario, setup, nullptr);
    std::sort(out.calibration.begin(), out.calibration.end());
  }
  for (const auto& q : setup.quant) {
    if (q.censored) continue;
    if (q.bits_int >= 1) {
      ++out.diagnostics.transmitting;
    } else {
      ++out.diagnostics.zero_bit_active;
    }
  }
  out.diagnostics.quant_offset = setup.moments.quant_offset;
  return out;
}

FusedSamples simulate_fused(const Scenario& scenario, const SchemeSetup& setup,
                            const TrialOptions& opts) {
  return fuse_raw(simulate_raw(scenario, opts), scenario, setup);
}

DetectionEstimate evaluate(const FusedSamples& samples, const SchemeSetup& setup, double pfa,
                           ThresholdSource source) {
  DetectionEstimate e;
  e.scheme = setup.scheme;
  e.pfa_target = pfa;
  if (source == ThresholdSource::kAnalytic) {
    e.threshold = detection_threshold(setup.moments.without_quant_offset(), pfa);
  } else {
    const auto& c = samples.calibration;
    if (c.empty()) throw UsageError("evaluate: empirical threshold needs calibration samples");
    const auto n = static_cast<long>(c.size());
    const long idx = std::clamp<long>(
        static_cast<long>(std::ceil((1.0 - pfa) * static_cast<double>(n))) - 1, 0, n - 1);
    e.threshold = c[idx];
    const auto [first, last] = std::equal_range(c.begin(), c.end(), e.threshold);
    const double above = static_cast<double>(c.end() - last);
    const double equal = static_cast<double>(last - first);
    e.tie_probability = std::clamp((pfa * static_cast<double>(n) - above) / equal, 0.0, 1.0);
  }
  e.trials = static_cast<long>(samples.h1.size());
  e.pd_hat = decision_rate(samples.h1, e.threshold, e.tie_probability);
  e.pfa_hat = decision_rate(samples.h0, e.threshold, e.tie_probability);
  e.pd_analytic = analytic_pd(setup.moments, pfa);
  e.sigma_pd = binomial_sigma(e.pd_hat, e.trials);
  e.sigma_pfa = binomial_sigma(e.pfa_hat, static_cast<long>(samples.h0.size()));
  return e;
}

DetectionEstimate run_trials(const Scenario& scenario, const SchemeSetup& setup,
                             const TrialOptions& opts) {
  const auto samples = simulate_fused(scenario, setup, opts);
  return evaluate(samples, setup, scenario.Pfa, opts.threshold);
}

std::vector<DetectionEstimate> roc_curve(const Scenario& scenario, const SchemeSetup& setup,
                                         std::span<const double> pfa_grid,
                                         const TrialOptions& opts) {
  for (std::size_t i = 0; i < pfa_grid.size(); ++i) {
    if (!(pfa_grid[i] > 0.0 && pfa_grid[i] < 1.0) || (i > 0 && pfa_grid[i] <= pfa_grid[i - 1])) {
      throw UsageError("roc_curve: pfa grid must be increasing inside (0,1)");
    }
  }
  const auto samples = simulate_fused(scenario, setup, opts);
  std::vector<DetectionEstimate> out;
  out.reserve(pfa_grid.size());
  for (double pfa : pfa_grid) out.push_back(evaluate(samples, setup, pfa, opts.threshold));
  return out;
}

} // namespace wsnd
