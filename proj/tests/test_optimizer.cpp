#include <doctest.h>

#include <cmath>

#include "vlasov/config.hpp"
#include "vlasov/errors.hpp"
#include "vlasov/gradient.hpp"
#include "vlasov/optimizer.hpp"

using namespace vlasov;

TEST_CASE("config validation") {
  NcgConfig c;
  CHECK_NOTHROW(c.validate());
  c.armijo_c1 = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigInvalid);
  c = NcgConfig{};
  c.tol = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigInvalid);
}

TEST_CASE("quadratic surrogate converges to zero") {
  const TimeGrid time(1.0, 5);
  const PhaseGrid grid(4.0, 1.0, 6, 2);
  const PenaltyConfig pen{0.5, 1.0, 1.0};
  Objective obj;
  obj.inner = [&](const Lattice& u, const Lattice& w) { return inner_V(u, w, time, grid, pen); };
  obj.value = [&](const Lattice& b) { return 0.5 * pen.alpha * obj.inner(b, b); };
  obj.gradient = [&](const Lattice& b) { return ObjectiveGradient{obj.value(b), pen.alpha * b, 0}; };
  Lattice b0(6, 6);
  for (std::size_t j = 0; j < b0.data.size(); ++j) b0.data[j] = std::sin(0.7 * j) + 0.3;
  NcgConfig cfg;
  cfg.l_max = 50;
  cfg.tol = 1e-14;
  const auto report = ncg_minimize(b0, obj, cfg);
  const double n0 = std::sqrt(obj.inner(b0, b0));
  const double n1 = std::sqrt(obj.inner(report.final_control, report.final_control));
  CHECK(n1 < 1e-3 * n0);
  for (std::size_t j = 1; j < report.iterations.size(); ++j) {
    CHECK(report.iterations[j].cost <= report.iterations[j - 1].cost);
  }
}

TEST_CASE("Armijo condition holds on a nonquadratic objective") {
  const TimeGrid time(1.0, 3);
  const PhaseGrid grid(2.0, 1.0, 3, 2);
  const PenaltyConfig pen{1.0, 1.0, 1.0};
  Objective obj;
  obj.inner = [&](const Lattice& u, const Lattice& w) { return inner_L2(u, w, time, grid); };
  obj.value = [&](const Lattice& b) {
    double s = 0.0;
    for (double v : b.data) s += std::pow(v - 1.0, 4) + 0.5 * v * v;
    return s * time.dt() * grid.dx();
  };
  obj.gradient = [&](const Lattice& b) {
    // L2 Riesz representative of the derivative (weights include the trapezoid factors)
    Lattice g(b.n_times, b.n_x);
    for (std::size_t k = 0; k < b.n_times; ++k)
      for (std::size_t i = 0; i < b.n_x; ++i) {
        const double v = b(k, i);
        g(k, i) = (4.0 * std::pow(v - 1.0, 3) + v) / time_weight(k, time.n_t());
      }
    return ObjectiveGradient{obj.value(b), g, 0};
  };
  NcgConfig cfg;
  cfg.l_max = 15;
  std::vector<Lattice> controls;
  const auto report =
      ncg_minimize(Lattice(4, 3, 3.0), obj, cfg, [&](const IterationRecord&, const Lattice& b) { controls.push_back(b); });
  REQUIRE(report.iterations.size() >= 2);
  CHECK(report.final_cost < report.iterations.front().cost);
  for (std::size_t j = 1; j < report.iterations.size(); ++j) {
    CHECK(report.iterations[j].cost < report.iterations[j - 1].cost + 1e-15);
  }
  (void)pen;
}

TEST_CASE("zero tracking weights give a stationary start") {
  ExperimentConfig c = preset_config("confinement");
  c.n_x = 4;
  c.n_v = 4;
  c.n_t = 3;
  for (auto& s : c.species) {
    s.n_particles = 200;
    s.tracking.c_theta = 0.0;
    s.tracking.c_phi = 0.0;
  }
  c.adjoint.n_terminal = 10;
  ReducedCost rc(make_problem(c));
  const auto report = ncg_minimize(rc.zero_control().values, make_objective(rc), c.ncg);
  CHECK(report.iterations.size() == 1);
  CHECK(report.converged);
  CHECK(report.stop_reason == "zero gradient");
}

TEST_CASE("initial_step rescales the first trial step") {
  const TimeGrid time(1.0, 2);
  const PhaseGrid grid(2.0, 1.0, 2, 2);
  Objective obj;
  obj.inner = [&](const Lattice& u, const Lattice& w) { return inner_L2(u, w, time, grid); };
  // tiny gradient, minimum far away at b = 1
  obj.value = [](const Lattice& b) {
    double s = 0.0;
    for (double v : b.data) s += 1e-6 * (v - 1.0) * (v - 1.0);
    return s;
  };
  obj.gradient = [&](const Lattice& b) {
    Lattice g(b.n_times, b.n_x);
    for (std::size_t k = 0; k < b.n_times; ++k)
      for (std::size_t i = 0; i < b.n_x; ++i)
        g(k, i) = 2e-6 * (b(k, i) - 1.0) / (time_weight(k, 2) * time.dt() * grid.dx());
    return ObjectiveGradient{obj.value(b), g, 0};
  };
  NcgConfig cfg;
  cfg.l_max = 1;
  cfg.initial_step = 0.5;
  const auto report = ncg_minimize(Lattice(3, 2, 0.0), obj, cfg);
  REQUIRE(report.iterations.size() == 2);
  CHECK(report.final_control.max_abs() == doctest::Approx(0.5));
}
