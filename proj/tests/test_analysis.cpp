#include <doctest.h>

#include <cmath>

#include "vlasov/analysis.hpp"
#include "vlasov/errors.hpp"

using namespace vlasov;

TEST_CASE("synthetic damped signal gives the imposed rate") {
  std::vector<double> t, e;
  for (int k = 0; k <= 2000; ++k) {
    t.push_back(0.01 * k);
    const double c = std::cos(1.4 * t.back());
    e.push_back(std::exp(-0.6 * t.back()) * c * c + 1e-14);
  }
  const auto fit = fit_damping_rate(t, e, 0.0, 10.0);
  CHECK(fit.rate == doctest::Approx(0.6).epsilon(0.02 / 0.6));
  CHECK(fit.peaks >= 3);
  CHECK(fit.r_squared > 0.999);
}

TEST_CASE("envelope-only fit stops at the noise floor") {
  std::vector<double> t, e;
  for (int k = 0; k <= 2000; ++k) {
    t.push_back(0.01 * k);
    const double c = std::cos(1.4 * t.back());
    e.push_back(std::max(std::exp(-0.6 * t.back()), 1e-4) * c * c);
  }
  const auto whole = fit_damping_rate(t, e, 0.0, 20.0, false);
  const auto env = fit_damping_rate(t, e, 0.0, 20.0, true);
  CHECK(env.rate == doctest::Approx(0.6).epsilon(0.05));
  CHECK(whole.rate < env.rate);
}

TEST_CASE("damping fit edge cases") {
  std::vector<double> t{0, 1, 2, 3, 4}, flat(5, 2.0), mono{5, 4, 3, 2, 1};
  CHECK(fit_damping_rate(t, flat, 0.0, 4.0).rate == 0.0);
  CHECK_THROWS_AS(fit_damping_rate(t, mono, 0.0, 4.0), InsufficientPeaks);
  const auto idx = local_maxima(std::vector<double>{0, 1, 2, 3, 4}, std::vector<double>{0, 2, 1, 3, 0}, 0.0, 4.0);
  CHECK(idx == std::vector<std::size_t>{1, 3});
}

TEST_CASE("growth factor and saturation") {
  std::vector<double> t, e;
  for (int k = 0; k <= 400; ++k) {
    const double s = 0.1 * k;
    t.push_back(s);
    e.push_back(s < 20.0 ? std::exp(0.5 * s) : std::exp(10.0) * (0.8 + 0.2 * std::cos(s - 20.0)));
  }
  const auto g = growth_factor(t, e);
  CHECK(g.factor == doctest::Approx(std::exp(10.0)).epsilon(1e-6));
  CHECK(g.t_saturation == doctest::Approx(20.0).epsilon(0.01));
  CHECK(g.factor_at_saturation >= 100.0);
}

TEST_CASE("beam correlations") {
  std::vector<Particle> init, same, mixed;
  for (int j = 0; j < 1000; ++j) {
    const double v = j % 2 ? 3.0 : -3.0;
    init.push_back({0.01 * j, v, 0.0});
    same.push_back({0.01 * j, v, 0.0});
    mixed.push_back({0.01 * j, (j / 2) % 2 ? 3.0 : -3.0, 0.0});
  }
  CHECK(beam_sign_correlation(init, same) == doctest::Approx(1.0));
  CHECK(std::abs(beam_sign_correlation(init, mixed)) < 0.05);
  const PhaseGrid g(10.0, 5.0, 4, 4);
  CHECK(beam_mixing_correlation(init, same, g) == doctest::Approx(1.0));
}
