#include <doctest.h>

#include <cmath>

#include "vlasov/adjoint.hpp"
#include "vlasov/pusher.hpp"

using namespace vlasov;

TEST_CASE("velocity stencils by hand") {
  const PhaseGrid g(2.0, 1.5, 2, 3);  // dv = 1
  OccupationTensor t(g);
  t(0, 0, 1) = 1;
  t(0, 1, 1) = 4;
  t(0, 2, 1) = 9;
  CHECK(velocity_derivative(t, 0, 0, 1, 1, VelocityStencil::forward) == 3);
  CHECK(velocity_derivative(t, 0, 2, 1, 1, VelocityStencil::forward) == 5);  // backward closure
  CHECK(velocity_derivative(t, 0, 1, 1, 1, VelocityStencil::central) == 4);
  CHECK(velocity_derivative(t, 0, 0, 1, 1, VelocityStencil::central) == 3);
  CHECK(velocity_derivative(t, 0, 2, 1, 1, VelocityStencil::central) == 5);
  CHECK(velocity_derivative(t, 0, 1, 0, 2, VelocityStencil::central) == 4);
  CHECK(velocity_derivative(t, 0, 1, 1, 2, VelocityStencil::central) == 0);
}

TEST_CASE("velocity interpolation is bilinear and clamped") {
  const PhaseGrid g(2.0, 1.0, 2, 2);  // centres at -0.5, 0.5
  const std::vector<double> f{0.0, 1.0, 2.0, 3.0, 9.0, 9.0, 9.0, 9.0};  // f(l, m) = 2 l + m
  CHECK(interpolate_velocity(f, g, 0, 0.0, 0.0) == doctest::Approx(1.5));
  CHECK(interpolate_velocity(f, g, 0, 0.25, -0.5) == doctest::Approx(1.5));
  CHECK(interpolate_velocity(f, g, 0, -0.9, 0.9) == doctest::Approx(1.0));
}

TEST_CASE("reaction term by hand") {
  const PhaseGrid g(2.0, 1.0, 2, 2);  // dx = dv = 1, cell volume 1
  PerSpecies<OccupationTensor> lam{OccupationTensor(g), OccupationTensor(g)};
  PerSpecies<OccupationTensor> f{OccupationTensor(g), OccupationTensor(g)};
  lam[0](0, 0, 0) = 2;
  f[0](0, 0, 0) = 1;
  f[0](0, 1, 0) = 3;
  const PerSpecies<SpeciesParams> sp{SpeciesParams::electrons(), SpeciesParams::ions()};
  // a_0 = mu_v lam d1 f = -1 * 2 * 2 = -4, a_1 = 0; I[a] = (0, -2)
  const auto r = reaction_field(lam, {1.0, 1.0}, f, {1.0, 1.0}, sp, VelocityStencil::central);
  CHECK(r[0][0] == doctest::Approx(0.0));
  CHECK(r[0][1] == doctest::Approx(-2.0));
  CHECK(r[1][0] == doctest::Approx(0.0));
  CHECK(r[1][1] == doctest::Approx(2.0));
}

TEST_CASE("particle weight and terminal condition") {
  TrackingWeights w;
  AdjointOptions o;
  o.n_terminal = 100;
  w.c_phi = 2.0;
  CHECK(adjoint_particle_weight(w, o, 4.0) == doctest::Approx(0.02));
  w.c_phi = 0.0;
  w.c_theta = 1.0;
  CHECK(adjoint_particle_weight(w, o, 4.0) == doctest::Approx(0.04));
  w.c_theta = 0.0;
  CHECK(adjoint_particle_weight(w, o, 4.0) == 1.0);
  o.particle_weight = 0.5;
  CHECK(adjoint_particle_weight(w, o, 4.0) == 0.5);

  RandomStream rng(1);
  CHECK(terminal_condition(w, SpeciesParams::electrons(), 100, 0.5, 10.0, rng).size() == 0);
  w.c_phi = 1.0;
  w.terminal_target = {5.0, 0.0, 0.0};
  const auto t = terminal_condition(w, SpeciesParams::electrons(), 100, 0.5, 10.0, rng);
  CHECK(t.size() == 100);
  CHECK(t.weight == 0.5);
}

TEST_CASE("source creation reproduces the theta mass") {
  const PhaseGrid g(4.0, 3.0, 4, 6);
  TrackingWeights w;
  w.c_theta = 1.0;
  w.cov_theta = {1.0, 1.0, 1.0};
  w.path_points = {PhasePoint{2.0, 0.0, 0.0}};
  SpeciesParticles lam;
  lam.weight = 1e-5;
  OccupationTensor t(g);
  RandomStream rng(3);
  const SpatialField zero(g.n_x(), 0.0);
  const double dt = 0.1;
  const auto stats = create_reaction_source_particles(lam, t, w, zero, 0.0, dt, rng);
  double expected = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t l = 0; l < 6; ++l)
      for (std::size_t m = 0; m < 6; ++m) expected += w.theta_cell_mass(0.0, g, i, l, m) * dt;
  CHECK(stats.created == lam.size());
  CHECK(t.total() + t.escaped_total() == lam.size());
  CHECK(stats.created_mass == doctest::Approx(expected).epsilon(0.01));
  CHECK(stats.clamped_cells == 0);

  const SpatialField big(g.n_x(), 1.0);
  SpeciesParticles lam2;
  lam2.weight = 1e-5;
  OccupationTensor t2(g);
  const auto s2 = create_reaction_source_particles(lam2, t2, w, big, 0.0, dt, rng);
  CHECK(s2.clamped_cells > 0);
  CHECK(s2.clamped_mass > 0.0);
}

TEST_CASE("without creation the adjoint is pure backward transport") {
  const PhaseGrid g(8.0, 4.0, 8, 8);
  const TimeGrid time(1.0, 5);
  ForwardSetup setup{g, time, {}, 1e-10, 0.01, 1};
  setup.species[0].params = SpeciesParams::electrons();
  setup.species[1].params = SpeciesParams::ions();
  ForwardTrajectory fwd{time, g, {1.0, 1.0}, {}, {}, {}, {}, {}, {}};
  fwd.electric.assign(time.n_t() + 1, SpatialField(g.n_x(), 0.0));
  fwd.tensors.assign(time.n_t() + 1, PerSpecies<OccupationTensor>{OccupationTensor(g), OccupationTensor(g)});
  PerSpecies<TrackingWeights> w;
  for (auto& x : w) {
    x.c_phi = 1.0;
    x.terminal_target = {4.0, 0.0, 0.0};
  }
  const ControlField b(time, g, 0.7);
  AdjointOptions o;
  o.n_terminal = 500;
  o.creation = false;
  o.estimator = DerivativeEstimator::tensor;
  const auto adj = adjoint_solve(fwd, setup, b, w, o, 17);

  for (std::size_t s = 0; s < 2; ++s) {
    auto rng = RandomStream::substream(17, StreamPurpose::adjoint_terminal, s);
    auto ps = terminal_condition(w[s], setup.species[s].params, 500, adj.weights[s], g.p_max(), rng).particles;
    const auto bv = b.step_values(0);
    for (auto& p : ps) {
      for (int k = 0; k < 5; ++k) {
        p = boris_push_reverse(p, [&](double x) { return LocalFields{0.0, interpolate_periodic(bv, x, g)}; },
                               setup.species[s].params, time.dt(), g.p_max());
      }
    }
    CHECK(adj.final[s].particles == ps);
    CHECK(adj.tensors[0][s].counts() == assemble_occupation(ps, g).counts());
    CHECK(adj.stats[0].n_lambda[s] == 500);
  }
}
