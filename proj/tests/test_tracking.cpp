#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vlasov/tracking.hpp"

using namespace vlasov;

TEST_CASE("gaussian normalisation and interval mass") {
  CHECK(gaussian_interval_mass(-1.0, 1.0, 0.0, 1.0) == doctest::Approx(0.682689492137));
  CHECK(gaussian_interval_mass(-50.0, 50.0, 3.0, 4.0) == doctest::Approx(1.0));
  const PhasePoint mean{1.0, 0.0, 0.0}, cov{4.0, 1.0, 1.0};
  CHECK(gaussian3(Particle{1.0, 0.0, 0.0}, mean, cov) ==
        doctest::Approx(1.0 / (std::pow(2.0 * std::numbers::pi, 1.5) * 2.0)));
}

TEST_CASE("theta and phi are negative scaled gaussians") {
  TrackingWeights w;
  w.c_theta = 2.0;
  w.c_phi = 3.0;
  w.cov_theta = {1.0, 2.0, 3.0};
  w.cov_phi = {1.0, 1.0, 1.0};
  w.path_times = {0.0, 1.0};
  w.path_points = {PhasePoint{0.0, 0.0, 0.0}, PhasePoint{2.0, 0.0, 0.0}};
  w.terminal_target = {1.0, 1.0, 1.0};
  CHECK(w.target(0.5)[0] == doctest::Approx(1.0));
  CHECK(w.target(5.0)[0] == doctest::Approx(2.0));
  const Particle z{1.0, 0.5, -0.5};
  CHECK(w.theta(0.5, z) == doctest::Approx(-2.0 * gaussian3(z, PhasePoint{1.0, 0.0, 0.0}, w.cov_theta)));
  CHECK(w.phi(z) == doctest::Approx(-3.0 * gaussian3(z, w.terminal_target, w.cov_phi)));
}

TEST_CASE("theta cell mass agrees with midpoint quadrature") {
  TrackingWeights w;
  w.c_theta = 1.5;
  w.cov_theta = {0.8, 1.2, 0.6};
  w.path_points = {PhasePoint{1.3, 0.2, -0.4}};
  const PhaseGrid g(4.0, 2.0, 4, 4);
  const int q = 40;
  for (auto [i, l, m] : {std::array<std::size_t, 3>{1, 2, 1}, {0, 0, 3}, {3, 1, 2}}) {
    double sum = 0.0;
    const double x0 = i * g.dx(), v10 = l * g.dv() - 2.0, v20 = m * g.dv() - 2.0;
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b)
        for (int c = 0; c < q; ++c) {
          const Particle z{x0 + (a + 0.5) * g.dx() / q, v10 + (b + 0.5) * g.dv() / q, v20 + (c + 0.5) * g.dv() / q};
          sum += -w.theta(0.0, z);
        }
    sum *= g.cell_volume() / (q * q * q);
    CHECK(w.theta_cell_mass(0.0, g, i, l, m) == doctest::Approx(sum).epsilon(1e-3));
  }
}
