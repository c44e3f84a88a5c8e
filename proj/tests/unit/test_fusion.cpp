#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "wsnd/errors.hpp"
#include "wsnd/fusion.hpp"
#include "wsnd/model.hpp"
#include "wsnd/qfunc.hpp"
#include "wsnd/quantize.hpp"

using namespace wsnd;
using wsnd::testing::make_scenario;
using wsnd::testing::make_sensor;

namespace {

Scenario random_scenario(Rng& rng, int m, int n) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<SensorParams> sensors;
  for (int i = 0; i < m; ++i)
    sensors.push_back(make_sensor(0.5 + 1.5 * u01(rng), 0.05 + 0.9 * u01(rng),
                                  0.1 + 1.5 * u01(rng), 0.1, n));
  return make_scenario(std::move(sensors), 3.0, 1.0);
}

PowerAllocation random_powers(Rng& rng, int m) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  PowerAllocation a;
  for (int i = 0; i < m; ++i) a.p.push_back(0.05 + u01(rng));
  return a;
}

} // namespace

TEST_CASE("fuse") {
  const std::vector<std::uint8_t> live(4, 0);
  const double t[] = {7.0, 1.0, 1.0, 1.0};
  CHECK(fuse(t, live, FusionWeights{{1.0, 0.0, 0.0, 0.0}}) == 7.0);
  const double t2[] = {2.0, 3.0};
  CHECK(fuse(t2, std::vector<std::uint8_t>(2, 0), FusionWeights{{1.0, 1.0}}) == 5.0);
  const double ones[] = {1.0, 1.0, 1.0, 1.0};
  CHECK(fuse(ones, live, FusionWeights{std::vector<double>(4, 0.5)}) ==
        doctest::Approx(2.0).epsilon(1e-15));

  const std::vector<std::uint8_t> mask{0, 1, 0, 0};
  CHECK(fuse(t, mask, FusionWeights{{1.0, 0.0, 1.0, 1.0}}) == 9.0);
  CHECK_THROWS_AS(fuse(t, mask, FusionWeights{{1.0, 1.0, 1.0, 1.0}}), UsageError);
  CHECK_THROWS_AS(fuse(t, std::vector<std::uint8_t>(4, 1), FusionWeights{std::vector<double>(4, 0.0)}),
                  DegenerateFusionError);
}

TEST_CASE("fusion_moments") {
  SUBCASE("xi = 0 equalizes the variances") {
    const auto sc = make_scenario({make_sensor(1.3, 0.0, 1.0, 0.1, 10)}, 3.0, 1.0);
    const PowerAllocation pw{{1.0}, 0.0};
    const auto m = fusion_moments(sc, FusionWeights{{1.0}}, pw);
    const double expect = 2 * 10 * 1.3 * 1.3 + quant_noise_var(1.0, 1.0, 0.1, 3.0);
    CHECK(m.var_h0 == doctest::Approx(expect).epsilon(1e-14));
    CHECK(m.var_h1 == doctest::Approx(expect).epsilon(1e-14));
    CHECK(m.psi == 0.0);
  }
  SUBCASE("hand-evaluated single sensor") {
    const auto sc = make_scenario({make_sensor(1.0, 0.4, 1.0, 0.1, 10)}, 3.0, 1.0);
    const auto m = fusion_moments(sc, FusionWeights{{1.0}}, PowerAllocation{{1.0}, 0.0});
    CHECK(m.psi == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(m.var_h1 == doctest::Approx(36.0 + 9.0 / 33.0).epsilon(1e-12));
    CHECK(m.var_h0 == doctest::Approx(20.0 + 9.0 / 33.0).epsilon(1e-12));
    CHECK(m.mean_h0 == doctest::Approx(10.0 + 3.0).epsilon(1e-12));
    CHECK(m.quant_offset == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(m.without_quant_offset().mean_h0 == doctest::Approx(10.0).epsilon(1e-12));
  }
  SUBCASE("censored sensors are excluded, psi identity and U independence") {
    Rng rng = make_stream(2, 3);
    for (int rep = 0; rep < 20; ++rep) {
      auto sc = random_scenario(rng, 6, 10);
      auto pw = random_powers(rng, 6);
      pw.p[2] = 0.0;
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      FusionWeights w;
      for (int i = 0; i < 6; ++i) w.alpha.push_back(i == 2 ? 0.0 : u(rng));
      const auto m = fusion_moments(sc, w, pw);
      double psi = 0.0;
      for (int i = 0; i < 6; ++i)
        psi += w.alpha[i] * sc.N() * sc.sensors[i].sigma2() * sc.sensors[i].xi();
      CHECK(m.psi == doctest::Approx(psi).epsilon(1e-12));
      CHECK(m.var_h1 >= m.var_h0);
      CHECK(m.var_h0 > 0.0);
      sc.U = 17.0;
      CHECK(fusion_moments(sc, w, pw).psi == doctest::Approx(m.psi).epsilon(1e-12));
    }
  }
}

TEST_CASE("analytic_pd") {
  FusionMoments chance{5.0, 4.0, 5.0, 4.0, 0.0, 0.0};
  for (double pfa : {0.01, 0.1, 0.5, 0.9}) CHECK(analytic_pd(chance, pfa) == pfa);
  FusionMoments far{0.0, 1.0, 1e6, 1.0, 1e6, 0.0};
  CHECK(analytic_pd(far, 0.1) > 1.0 - 1e-12);

  double prev = 0.0;
  for (double psi = 0.0; psi < 10.0; psi += 0.25) {
    FusionMoments m{0.0, 2.0, psi, 3.0, psi, 0.0};
    const double pd = analytic_pd(m, 0.1);
    if (psi > 0.0) CHECK(pd > prev);
    prev = pd;
  }
  FusionMoments m{0.0, 2.0, 1.5, 3.0, 1.5, 0.0};
  CHECK(analytic_pd(m, 0.1) ==
        doctest::Approx(q_function((q_inverse(0.1) * std::sqrt(2.0) - 1.5) / std::sqrt(3.0)))
            .epsilon(1e-15));
}

TEST_CASE("deflection") {
  SUBCASE("parallel to b with scaled identity R") {
    DeflectionInputs in{{1.0, 2.0, 3.0}, {4.0, 4.0, 4.0}, {0, 0, 0}};
    CHECK(deflection(FusionWeights{{1.0, 2.0, 3.0}}, in) == doctest::Approx(14.0 / 4.0).epsilon(1e-14));
  }
  SUBCASE("scale invariance") {
    Rng rng = make_stream(8, 1);
    std::normal_distribution<double> g;
    DeflectionInputs in{{1.0, 0.5, 2.0, 0.1}, {3.0, 1.0, 7.0, 2.0}, {0, 0, 0, 0}};
    for (int rep = 0; rep < 100; ++rep) {
      FusionWeights w{{g(rng), g(rng), g(rng), g(rng)}};
      const double c = g(rng) * 10.0;
      FusionWeights wc = w;
      for (auto& a : wc.alpha) a *= c;
      CHECK(deflection(wc, in) == doctest::Approx(deflection(w, in)).epsilon(1e-12));
    }
  }
  SUBCASE("b = (1,2), R = I bound") {
    DeflectionInputs in{{1.0, 2.0}, {1.0, 1.0}, {0, 0}};
    Rng rng = make_stream(8, 2);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 1000; ++rep)
      CHECK(deflection(FusionWeights{{g(rng), g(rng)}}, in) <= 5.0 + 1e-12);
  }
  SUBCASE("zero weights rejected") {
    DeflectionInputs in{{1.0}, {1.0}, {0}};
    CHECK_THROWS_AS(deflection(FusionWeights{{0.0}}, in), UsageError);
  }
}

TEST_CASE("deflection_inputs follow the quantizer noise model") {
  const auto sc = make_scenario({make_sensor(1.0, 0.4, 1.0, 0.1, 10)}, 3.0, 1.0);
  const auto in = deflection_inputs(sc, PowerAllocation{{1.0}, 0.0});
  CHECK(in.b[0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(in.R_diag[0] == doctest::Approx(36.0 + 9.0 / 33.0).epsilon(1e-12));
}

TEST_CASE("optimal_weights") {
  SUBCASE("identical sensors give uniform weights") {
    std::vector<SensorParams> s(5, make_sensor(1.2, 0.3, 0.9, 0.1, 10));
    const auto sc = make_scenario(s, 3.0, 1.0);
    const auto w = optimal_weights(deflection_inputs(sc, equal_power(5, 1.0)));
    for (double a : w.alpha) CHECK(a == doctest::Approx(w.alpha[0]).epsilon(1e-15));
  }
  SUBCASE("zero-SNR sensor gets zero weight") {
    const auto sc = make_scenario({make_sensor(1.0, 0.3, 1.0, 0.1, 10),
                                   make_sensor(1.0, 0.0, 1.0, 0.1, 10)},
                                  3.0, 1.0);
    CHECK(optimal_weights(deflection_inputs(sc, equal_power(2, 1.0))).alpha[1] == 0.0);
  }
  SUBCASE("censored sensor gets zero weight") {
    const auto sc = make_scenario({make_sensor(1.0, 0.3, 1.0, 0.1, 10),
                                   make_sensor(1.0, 0.5, 1.0, 0.1, 10)},
                                  3.0, 1.0);
    const auto w = optimal_weights(deflection_inputs(sc, PowerAllocation{{1.0, 0.0}, 0.0}));
    CHECK(w.alpha[1] == 0.0);
    CHECK(w.alpha[0] > 0.0);
  }
  SUBCASE("maximal against random weights and equal to sum b^2/R") {
    Rng rng = make_stream(9, 1);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 10; ++rep) {
      const auto sc = random_scenario(rng, 10, 10);
      const auto in = deflection_inputs(sc, random_powers(rng, 10));
      const double best = deflection(optimal_weights(in), in);
      CHECK(best == doctest::Approx(max_deflection(in)).epsilon(1e-9));
      for (int k = 0; k < 1000; ++k) {
        FusionWeights w;
        for (int i = 0; i < 10; ++i) w.alpha.push_back(g(rng));
        REQUIRE(deflection(w, in) <= best * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("equal_weights") {
  const auto w = equal_weights(PowerAllocation{{0.5, 0.0, 0.5, 0.5}, 0.0});
  CHECK(w.alpha[0] == 0.5);
  CHECK(w.alpha[1] == 0.0);
}

TEST_CASE("matched filter") {
  const auto s = make_sensor(1.0, 0.04, 1.0, 0.1, 10);
  std::vector<double> x(s.signal().begin(), s.signal().end());
  CHECK(matched_filter_statistic(x, s) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK_THROWS_AS(matched_filter_statistic(x, SensorParams(1.0, 1.0, 0.1, std::vector<double>(10, 0.0))),
                  UsageError);

  // Weight formula with Es = 0.4, sigma2 = 1: Es / (Es + sigma_v^2).
  const auto sc = make_scenario({s}, 3.0, 1.0);
  const auto w = matched_filter_weights(sc, PowerAllocation{{1.0}, 0.0});
  const double sv = quant_noise_var(1.0, 1.0, 0.1, 3.0);
  CHECK(w.alpha[0] == doctest::Approx(0.4 / (0.4 + sv)).epsilon(1e-14));
  // As the quantizer noise vanishes the weight tends to Es / Es = 1.
  auto big = make_scenario({s}, 3.0, 1.0);
  const auto w_inf = matched_filter_weights(big, PowerAllocation{{1e15}, 0.0});
  CHECK(w_inf.alpha[0] == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng = make_stream(4, 4);
  const int n = 100'000;
  double sum = 0.0, sum2 = 0.0;
  for (int t = 0; t < n; ++t) {
    const auto obs = generate_observations(s, Hypothesis::H0, rng);
    const double v = matched_filter_statistic(obs, s);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  CHECK(std::abs(mean) <= 3.0 * sd / std::sqrt(static_cast<double>(n)));
}
