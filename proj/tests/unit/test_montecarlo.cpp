#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "wsnd/errors.hpp"
#include "wsnd/montecarlo.hpp"
#include "wsnd/qfunc.hpp"
#include "wsnd/solver_central.hpp"

using namespace wsnd;
using wsnd::testing::make_scenario;

namespace {

// Population with a quantizer range wide enough that clipping and whole-bit
// rounding are negligible, so the Gaussian model is the only approximation.
Scenario wide_range_scenario(int m, int n, double xi_db, std::uint64_t seed) {
  PopulationSpec spec;
  spec.sensors = m;
  spec.samples = n;
  spec.xi_a_db = xi_db;
  Rng rng = make_stream(seed, 1);
  auto sc = make_scenario(draw_population(spec, rng), 4.0 * n, 1e5);
  sc.seed = seed;
  return sc;
}

} // namespace

TEST_CASE("scheme names round trip") {
  for (Scheme s : all_schemes()) CHECK(parse_scheme(to_string(s)) == s);
  CHECK(to_string(Scheme::kEdOptWeightsOptPower) == "ED_opt_weights_opt_power");
  CHECK_THROWS_AS(parse_scheme("ED"), UsageError);
  CHECK(all_schemes().size() == 6);
}

TEST_CASE("detection_threshold") {
  FusionMoments m{4.0, 9.0, 6.0, 10.0, 2.0, 0.0};
  CHECK(detection_threshold(m, 0.5) == 4.0);
  double prev = detection_threshold(m, 0.4);
  for (double pfa = 0.1; pfa > 1e-9; pfa /= 10.0) {
    const double t = detection_threshold(m, pfa);
    CHECK(t > prev);
    prev = t;
  }
  CHECK(detection_threshold(m, 0.1) == doctest::Approx(4.0 + 3.0 * q_inverse(0.1)).epsilon(1e-15));
}

TEST_CASE("analytic threshold calibrates H0 at N = 100") {
  const auto sc = wide_range_scenario(10, 100, -12.0, 5);
  const auto setup = setup_scheme(sc, Scheme::kEdOptWeightsOptPower, solve_centralized(sc));
  TrialOptions opt;
  opt.trials = 100'000;
  const auto samples = simulate_fused(sc, setup, opt);
  const auto est = evaluate(samples, setup, 0.1, ThresholdSource::kAnalytic);
  CHECK(std::abs(est.pfa_hat - 0.1) <= 0.01);

  // Fused H0 variance against the analytic model.
  const double n = static_cast<double>(samples.h0.size());
  const double mean = std::accumulate(samples.h0.begin(), samples.h0.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : samples.h0) ss += (v - mean) * (v - mean);
  CHECK(std::abs(ss / n - setup.moments.var_h0) / setup.moments.var_h0 < 0.05);
  CHECK(samples.diagnostics.clip_rate_h0 < 1e-3);
}

TEST_CASE("zero signal detects at chance") {
  auto sc = wide_range_scenario(5, 20, -6.0, 6);
  const auto powers = solve_centralized(sc);
  for (auto& s : sc.sensors) s = s.with_scaled_signal(0.0);
  // Weights come from the signal-bearing scenario; the statistics carry no signal.
  auto with_signal = wide_range_scenario(5, 20, -6.0, 6);
  const auto setup = setup_scheme(with_signal, Scheme::kEdOptWeightsOptPower, powers);
  TrialOptions opt;
  opt.trials = 50'000;
  const auto est = run_trials(sc, setup, opt);
  const double sigma = std::sqrt(0.1 * 0.9 / opt.trials);
  CHECK(std::abs(est.pd_hat - est.pfa_hat) <= 3.0 * std::sqrt(2.0) * sigma);
}

TEST_CASE("results do not depend on the worker count") {
  const auto sc = wide_range_scenario(6, 10, -4.0, 7);
  const auto setup = setup_scheme(sc, Scheme::kMfdOptPower, solve_centralized(sc));
  TrialOptions one;
  one.trials = 5000;
  one.threshold = ThresholdSource::kEmpirical;
  TrialOptions three = one;
  three.workers = 3;
  const auto a = simulate_fused(sc, setup, one);
  const auto b = simulate_fused(sc, setup, three);
  CHECK(a.h0 == b.h0);
  CHECK(a.h1 == b.h1);
  CHECK(a.calibration == b.calibration);
}

TEST_CASE("empirical threshold hits the calibration rate exactly") {
  auto sc = wide_range_scenario(10, 10, -4.0, 8);
  sc.U = 3.0;
  sc.Pt = 1.0;
  const auto setup = setup_scheme(sc, Scheme::kEdOptWeightsOptPower, solve_centralized(sc));
  TrialOptions opt;
  opt.trials = 20'000;
  opt.threshold = ThresholdSource::kEmpirical;
  const auto samples = simulate_fused(sc, setup, opt);
  for (double pfa : {0.05, 0.1, 0.5}) {
    auto cal = samples;
    cal.h0 = samples.calibration;
    const auto e = evaluate(cal, setup, pfa, ThresholdSource::kEmpirical);
    CHECK(e.pfa_hat == doctest::Approx(pfa).epsilon(1e-9));
    CHECK(e.tie_probability >= 0.0);
    CHECK(e.tie_probability <= 1.0);
  }
}

TEST_CASE("roc_curve") {
  const auto sc10 = wide_range_scenario(10, 10, -4.0, 9);
  const auto ed = setup_scheme(sc10, Scheme::kEdOptWeightsOptPower, solve_centralized(sc10));
  const auto mf = setup_scheme(sc10, Scheme::kMfdOptPower, solve_centralized(sc10));
  TrialOptions opt;
  opt.trials = 20'000;
  const std::vector<double> grid{0.01, 0.05, 0.1, 0.3, 0.5, 0.9, 0.999};

  const auto r_ed = roc_curve(sc10, ed, grid, opt);
  const auto r_mf = roc_curve(sc10, mf, grid, opt);
  REQUIRE(r_ed.size() == grid.size());
  CHECK(r_ed.back().pd_hat > 0.99);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(r_ed[i].pfa_target == grid[i]);
    if (i > 0) CHECK(r_ed[i].pd_hat >= r_ed[i - 1].pd_hat);
    const double sig = std::sqrt(r_ed[i].sigma_pd * r_ed[i].sigma_pd + r_mf[i].sigma_pd * r_mf[i].sigma_pd);
    CHECK(r_mf[i].pd_hat >= r_ed[i].pd_hat - 2.0 * sig);
  }

  SUBCASE("more samples lift the energy-detector ROC") {
    auto sc50 = wide_range_scenario(10, 50, -4.0, 9);
    const auto ed50 = setup_scheme(sc50, Scheme::kEdOptWeightsOptPower, solve_centralized(sc50));
    const auto r50 = roc_curve(sc50, ed50, grid, opt);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) CHECK(r50[i].pd_hat > r_ed[i].pd_hat);
  }
  SUBCASE("invalid grids") {
    const std::vector<double> bad1{0.1, 0.1};
    const std::vector<double> bad2{0.0, 0.5};
    CHECK_THROWS_AS(roc_curve(sc10, ed, bad1, opt), UsageError);
    CHECK_THROWS_AS(roc_curve(sc10, ed, bad2, opt), UsageError);
  }
}

TEST_CASE("optimal weights are not worse than equal weights") {
  const auto sc = wide_range_scenario(10, 10, -4.0, 10);
  const auto powers = solve_centralized(sc);
  TrialOptions opt;
  opt.trials = 20'000;
  const auto raw = simulate_raw(sc, opt);
  const auto opt_w = setup_scheme(sc, Scheme::kEdOptWeightsOptPower, powers);
  const auto eq_w = setup_scheme(sc, Scheme::kEdEqualWeightsOptPower, powers);
  const auto a = evaluate(fuse_raw(raw, sc, opt_w), opt_w, 0.1, opt.threshold);
  const auto b = evaluate(fuse_raw(raw, sc, eq_w), eq_w, 0.1, opt.threshold);
  CHECK(a.pd_hat >= b.pd_hat - 2.0 * std::hypot(a.sigma_pd, b.sigma_pd));
}

TEST_CASE("all-censored allocations are rejected") {
  const auto sc = wide_range_scenario(3, 10, -4.0, 11);
  PowerAllocation none{std::vector<double>(3, 0.0), 1.0};
  CHECK_THROWS_AS(setup_scheme(sc, Scheme::kEdOptWeightsOptPower, none), DegenerateFusionError);
}

TEST_CASE("zero-bit sensors are reported and skipped") {
  auto sc = wide_range_scenario(10, 10, -4.0, 12);
  sc.U = 3.0;
  sc.Pt = 1.0;
  const auto setup = setup_scheme(sc, Scheme::kEdOptWeightsEqualPower, solve_centralized(sc));
  TrialOptions opt;
  opt.trials = 100;
  const auto f = simulate_fused(sc, setup, opt);
  int whole = 0, frac = 0;
  for (const auto& q : setup.quant) {
    if (q.censored) continue;
    (q.bits_int >= 1 ? whole : frac) += 1;
  }
  CHECK(f.diagnostics.transmitting == whole);
  CHECK(f.diagnostics.zero_bit_active == frac);
}
