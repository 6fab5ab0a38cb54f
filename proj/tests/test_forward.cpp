#include <doctest.h>

#include <cmath>

#include "vlasov/config.hpp"
#include "vlasov/experiment.hpp"
#include "vlasov/forward.hpp"

using namespace vlasov;

namespace {

ExperimentConfig small_landau() {
  ExperimentConfig c = preset_config("landau");
  c.n_x = 16;
  c.n_v = 16;
  c.n_t = 40;
  c.t_final = 4.0;
  for (auto& s : c.species) s.n_particles = 20000;
  return c;
}

}  // namespace

TEST_CASE("initial particles are deterministic and weighted by mass") {
  const ExperimentConfig c = small_landau();
  const ForwardSetup setup = make_forward_setup(c);
  const auto a = initial_particles(setup, 5);
  const auto b = initial_particles(setup, 5);
  const auto d = initial_particles(setup, 6);
  CHECK(a[0].particles == b[0].particles);
  CHECK_FALSE(a[0].particles == d[0].particles);
  CHECK(a[0].weight == doctest::Approx(c.p_max / 20000));
}

TEST_CASE("charge bookkeeping over a forward run") {
  const ExperimentConfig c = small_landau();
  const ForwardSetup setup = make_forward_setup(c);
  const auto traj =
      forward_solve(setup, initial_particles(setup, 1), ControlField(setup.time, setup.grid, 0.5), StoragePolicy::particles);
  const auto& d = traj.diagnostics;
  REQUIRE(d.t.size() == 41);
  for (std::size_t k = 0; k < d.t.size(); ++k) {
    CHECK(d.particle_count[0][k] == 20000);
    CHECK(d.particle_count[1][k] == 20000);
    CHECK(std::abs(d.net_charge[k]) <= 1e-10 * d.absolute_charge[k] + 1e-14);
  }
  const auto audit = audit_charge(d);
  CHECK(audit.counts_constant);
  CHECK(audit.max_relative_net_charge <= 1e-10);
  // diagnostics recomputed from stored snapshots agree
  const auto again = diagnostics(traj);
  CHECK(again.electric_energy == d.electric_energy);
  CHECK(again.max_deviation[0] == d.max_deviation[0]);
}

TEST_CASE("frozen species do not move") {
  ExperimentConfig c = small_landau();
  c.species[1].frozen = true;
  const ForwardSetup setup = make_forward_setup(c);
  const auto start = initial_particles(setup, 2);
  const auto traj = forward_solve(setup, start, ControlField(setup.time, setup.grid, 1.0));
  CHECK(traj.final[1].particles == start[1].particles);
  CHECK_FALSE(traj.final[0].particles == start[0].particles);
}

TEST_CASE("multi-threaded runs are bit-identical") {
  ExperimentConfig c = small_landau();
  const auto a = simulate(c);
  c.threads = 4;
  const auto b = simulate(c);
  CHECK(a.diagnostics.electric_energy == b.diagnostics.electric_energy);
  CHECK(a.diagnostics.var_x[0] == b.diagnostics.var_x[0]);
  CHECK(a.final[0].particles == b.final[0].particles);
}

TEST_CASE("position moments") {
  const std::vector<Particle> ps{{1.0, 0, 0}, {3.0, 0, 0}, {6.0, 0, 0}};
  const auto m = position_moments(ps, 8.0);
  CHECK(m.mean == doctest::Approx(10.0 / 3.0));
  CHECK(m.max_deviation == doctest::Approx(3.0));
  CHECK(electric_energy(std::vector<double>{1.0, 2.0}, 0.5) == doctest::Approx(2.5));
}

TEST_CASE("reduced cost is frozen-noise deterministic") {
  ExperimentConfig c = preset_config("confinement");
  c.n_t = 5;
  for (auto& s : c.species) s.n_particles = 2000;
  c.adjoint.n_terminal = 2000;
  ReducedCost rc(make_problem(c));
  const ControlField b(rc.problem().forward.time, rc.problem().forward.grid, 0.8);
  const auto g1 = rc.gradient(b);
  const auto g2 = rc.gradient(b);
  CHECK(g1.gradient.grad_V == g2.gradient.grad_V);
  CHECK(rc.evaluate(b).cost.total() == g1.cost.total());
}
