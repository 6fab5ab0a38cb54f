#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>

#include "vlasov/pusher.hpp"
#include "vlasov/random.hpp"

using namespace vlasov;

namespace {

// rhs of x' = mu_x v1, v1' = mu_v e + mu_x mu_v v2 b, v2' = -mu_x mu_v v1 b
std::array<double, 3> rhs(const std::array<double, 3>& y, double e, double b, const SpeciesParams& s) {
  const double w = s.mu_x * s.mu_v * b;
  return {s.mu_x * y[1], s.mu_v * e + w * y[2], -w * y[1]};
}

std::array<double, 3> rk4(std::array<double, 3> y, double e, double b, const SpeciesParams& s, double dt, int n) {
  const double h = dt / n;
  for (int j = 0; j < n; ++j) {
    auto add = [](std::array<double, 3> a, const std::array<double, 3>& k, double c) {
      for (int q = 0; q < 3; ++q) a[q] += c * k[q];
      return a;
    };
    const auto k1 = rhs(y, e, b, s);
    const auto k2 = rhs(add(y, k1, h / 2), e, b, s);
    const auto k3 = rhs(add(y, k2, h / 2), e, b, s);
    const auto k4 = rhs(add(y, k3, h), e, b, s);
    for (int q = 0; q < 3; ++q) y[q] += h / 6 * (k1[q] + 2 * k2[q] + 2 * k3[q] + k4[q]);
  }
  return y;
}

}  // namespace

TEST_CASE("free streaming") {
  const Particle p = boris_push(Particle{1.0, 2.0, -1.0}, {0.0, 0.0}, SpeciesParams::ions(0.1, 0.1), 0.5, 10.0);
  CHECK(p.v1 == 2.0);
  CHECK(p.v2 == -1.0);
  CHECK(p.x == doctest::Approx(1.1));
}

TEST_CASE("rotation step matches the r/s formulas and RK4") {
  const SpeciesParams el = SpeciesParams::electrons();
  const double dt = 0.1;
  const Particle p = boris_push(Particle{0.0, 1.0, 0.0}, {0.0, 1.0}, el, dt, 100.0);
  const double r = -0.5 * dt;
  const double s = 2 * r / (1 + r * r);
  // v- = (1, 0); v' = (1, -r); v+ = (1 + (-r) s, -s)
  CHECK(p.v1 == doctest::Approx(1.0 - r * s).epsilon(1e-15));
  CHECK(p.v2 == doctest::Approx(-s).epsilon(1e-15));
  const auto ref = rk4({0.0, 1.0, 0.0}, 0.0, 1.0, el, dt, 1000);
  CHECK(std::hypot(p.v1 - ref[1], p.v2 - ref[2]) < dt * dt);
}

TEST_CASE("Boris converges to RK4 at second order with an electric field") {
  const SpeciesParams el = SpeciesParams::electrons();
  const double T = 1.0;
  double prev = 0.0;
  for (int n : {20, 40, 80}) {
    Particle p{0.0, 0.3, -0.7};
    for (int j = 0; j < n; ++j) p = boris_push(p, {0.8, 1.3}, el, T / n, 1e9);
    const auto ref = rk4({0.0, 0.3, -0.7}, 0.8, 1.3, el, T, 4000);
    const double err = std::hypot(p.v1 - ref[1], p.v2 - ref[2]);
    if (prev > 0.0) CHECK(prev / err > 3.5);
    prev = err;
  }
}

TEST_CASE("pure magnetic rotation conserves speed to 4 ulp per step") {
  RandomStream rng(77);
  const SpeciesParams sp[] = {SpeciesParams::electrons(), SpeciesParams::ions()};
  for (int trial = 0; trial < 8; ++trial) {
    Particle p{rng.uniform(0.0, 10.0), rng.normal(), rng.normal()};
    const SpeciesParams& s = sp[trial % 2];
    double worst = 0.0;
    for (int j = 0; j < 10000; ++j) {
      const double before = std::hypot(p.v1, p.v2);
      p = boris_push(p, {0.0, rng.normal(0.0, 3.0)}, s, 0.05, 10.0);
      const double after = std::hypot(p.v1, p.v2);
      const double ulp = std::nextafter(before, std::numeric_limits<double>::infinity()) - before;
      worst = std::max(worst, std::abs(after - before) / ulp);
    }
    CHECK(worst <= 4.0);
  }
}

TEST_CASE("reverse push inverts the forward push") {
  RandomStream rng(8);
  const SpeciesParams s = SpeciesParams::electrons();
  const double p_max = 12.0;
  std::vector<double> e(16), b(16);
  for (auto& v : e) v = rng.normal();
  for (auto& v : b) v = rng.normal();
  const PhaseGrid grid(p_max, 6.0, 16, 8);
  auto field_at = [&](double x) {
    return LocalFields{interpolate_periodic(e, x, grid), interpolate_periodic(b, x, grid)};
  };
  for (int j = 0; j < 100; ++j) {
    const Particle p0{rng.uniform(0.0, p_max), rng.normal(), rng.normal()};
    const Particle p1 = boris_push(p0, field_at(p0.x), s, 0.1, p_max);
    const Particle back = boris_push_reverse(p1, field_at, s, 0.1, p_max);
    CHECK(back.x == doctest::Approx(p0.x).epsilon(1e-12));
    CHECK(back.v1 == doctest::Approx(p0.v1).epsilon(1e-12));
    CHECK(back.v2 == doctest::Approx(p0.v2).epsilon(1e-12));
  }
}

TEST_CASE("periodic interpolation") {
  const PhaseGrid g(4.0, 1.0, 4, 2);
  const std::vector<double> v{0.0, 1.0, 2.0, 3.0};
  CHECK(interpolate_periodic(v, 0.5, g) == doctest::Approx(0.0));
  CHECK(interpolate_periodic(v, 1.0, g) == doctest::Approx(0.5));
  CHECK(interpolate_periodic(v, 3.75, g) == doctest::Approx(2.25));
  CHECK(interpolate_periodic(v, 0.25, g) == doctest::Approx(0.75));  // wraps between cells 3 and 0
}
