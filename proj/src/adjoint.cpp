#include "vlasov/adjoint.hpp"

#include <cmath>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "vlasov/errors.hpp"
#include "vlasov/parallel.hpp"
#include "vlasov/pusher.hpp"

namespace vlasov {

double velocity_derivative(const OccupationTensor& t, std::size_t i, std::size_t l, std::size_t m,
                           int axis, VelocityStencil stencil) {
  const std::size_t n = t.grid().n_v();
  const double dv = t.grid().dv();
  const std::size_t j = axis == 1 ? l : m;
  auto at = [&](std::size_t idx) { return axis == 1 ? t(i, idx, m) : t(i, l, idx); };
  if (stencil == VelocityStencil::forward) {
    if (j + 1 < n) return (at(j + 1) - at(j)) / dv;
    return (at(j) - at(j - 1)) / dv;
  }
  if (j == 0) return (at(1) - at(0)) / dv;
  if (j + 1 == n) return (at(j) - at(j - 1)) / dv;
  return (at(j + 1) - at(j - 1)) / (2.0 * dv);
}

VelocityGradient velocity_gradient(const OccupationTensor& t, double weight, VelocityStencil stencil) {
  const PhaseGrid& grid = t.grid();
  const double scale = weight / grid.cell_volume();
  VelocityGradient g{std::vector<double>(grid.cell_count()), std::vector<double>(grid.cell_count())};
  for (std::size_t i = 0; i < grid.n_x(); ++i) {
    for (std::size_t l = 0; l < grid.n_v(); ++l) {
      for (std::size_t m = 0; m < grid.n_v(); ++m) {
        const std::size_t o = t.offset(i, l, m);
        g.d1[o] = scale * velocity_derivative(t, i, l, m, 1, stencil);
        g.d2[o] = scale * velocity_derivative(t, i, l, m, 2, stencil);
      }
    }
  }
  return g;
}

double interpolate_velocity(const std::vector<double>& field, const PhaseGrid& grid, std::size_t i, double v1,
                            double v2) {
  const std::size_t n = grid.n_v();
  auto locate = [&](double v, std::size_t& lo, double& w) {
    const double s = (v + grid.v_max()) / grid.dv() - 0.5;
    if (s <= 0.0) {
      lo = 0;
      w = 0.0;
    } else if (s >= static_cast<double>(n - 1)) {
      lo = n - 2;
      w = 1.0;
    } else {
      lo = static_cast<std::size_t>(s);
      w = s - static_cast<double>(lo);
    }
  };
  std::size_t l = 0, m = 0;
  double a = 0.0, b = 0.0;
  locate(v1, l, a);
  locate(v2, m, b);
  const std::size_t base = i * n * n;
  auto at = [&](std::size_t ll, std::size_t mm) { return field[base + ll * n + mm]; };
  return (1.0 - a) * ((1.0 - b) * at(l, m) + b * at(l, m + 1)) + a * ((1.0 - b) * at(l + 1, m) + b * at(l + 1, m + 1));
}

std::size_t AdjointTrajectory::total_clamped_cells() const {
  std::size_t n = 0;
  for (const auto& s : stats) {
    for (const auto& c : s.creation) n += c.clamped_cells;
  }
  return n;
}

double adjoint_particle_weight(const TrackingWeights& w, const AdjointOptions& options, double t_final) {
  if (options.particle_weight > 0.0) return options.particle_weight;
  const double n = static_cast<double>(std::max<std::size_t>(options.n_terminal, 1));
  if (w.c_phi > 0.0) return w.c_phi / n;
  if (w.c_theta > 0.0) return w.c_theta * t_final / n;
  return 1.0;
}

SpeciesParticles terminal_condition(const TrackingWeights& weights, const SpeciesParams& species,
                                    std::size_t n_terminal, double particle_weight, double p_max,
                                    RandomStream& rng) {
  SpeciesParticles out;
  out.species = species;
  out.weight = particle_weight;
  if (weights.c_phi == 0.0) return out;
  const PhasePoint& z = weights.terminal_target;
  const ProductDensity gaussian{NormalAxis{z[0], std::sqrt(weights.cov_phi[0])},
                                NormalAxis{z[1], std::sqrt(weights.cov_phi[1])},
                                NormalAxis{z[2], std::sqrt(weights.cov_phi[2])}};
  out.particles = sample_direct(gaussian, n_terminal, p_max, rng);
  return out;
}

PerSpecies<SpatialField> reaction_field(const PerSpecies<OccupationTensor>& lambda,
                                        const PerSpecies<double>& lambda_weights,
                                        const PerSpecies<OccupationTensor>& f,
                                        const PerSpecies<double>& f_weights,
                                        const PerSpecies<SpeciesParams>& species,
                                        VelocityStencil stencil) {
  const PhaseGrid& grid = f[0].grid();
  for (std::size_t s = 0; s < kNumSpecies; ++s) {
    if (!(lambda[s].grid() == grid) || !(f[s].grid() == grid)) {
      throw GridMismatch("reaction_field: tensors live on different grids");
    }
  }
  const double volume = grid.cell_volume();
  const double dv2 = grid.dv() * grid.dv();
  const std::size_t nv = grid.n_v();
  SpatialField a(grid.n_x(), 0.0);
  for (std::size_t s = 0; s < kNumSpecies; ++s) {
    const double scale = species[s].mu_v * (lambda_weights[s] / volume) * (f_weights[s] / volume) * dv2;
    for (std::size_t i = 0; i < grid.n_x(); ++i) {
      double column = 0.0;
      for (std::size_t l = 0; l < nv; ++l) {
        for (std::size_t m = 0; m < nv; ++m) {
          const double lam = lambda[s](i, l, m);
          if (lam == 0.0) continue;
          column += lam * velocity_derivative(f[s], i, l, m, 1, stencil);
        }
      }
      a[i] += scale * column;
    }
  }
  const SpatialField integral = symmetric_cumulative_integral(a, grid.dx());
  PerSpecies<SpatialField> out;
  for (std::size_t s = 0; s < kNumSpecies; ++s) {
    out[s].resize(grid.n_x());
    for (std::size_t i = 0; i < grid.n_x(); ++i) out[s][i] = -species[s].sign * integral[i];
  }
  return out;
}

PerSpecies<SpatialField> reaction_field_particles(const PerSpecies<OccupationTensor>& lambda,
                                                  const PerSpecies<double>& lambda_weights,
                                                  const PerSpecies<std::vector<Particle>>& f_particles,
                                                  const PerSpecies<double>& f_weights,
                                                  const PerSpecies<SpeciesParams>& species,
                                                  VelocityStencil stencil) {
  const PhaseGrid& grid = lambda[0].grid();
  if (!(lambda[1].grid() == grid)) throw GridMismatch("reaction_field_particles: tensors live on different grids");
  SpatialField a(grid.n_x(), 0.0);
  for (std::size_t s = 0; s < kNumSpecies; ++s) {
    if (lambda[s].total() == 0.0) continue;
    const VelocityGradient g = velocity_gradient(lambda[s], lambda_weights[s], stencil);
    std::vector<double> column(grid.n_x(), 0.0);
    for (const Particle& p : f_particles[s]) {
      if (!cell_index(p, grid)) continue;
      const std::size_t i = spatial_cell(p.x, grid);
      column[i] += interpolate_velocity(g.d1, grid, i, p.v1, p.v2);
    }
    const double scale = -species[s].mu_v * f_weights[s] / grid.dx();
    for (std::size_t i = 0; i < grid.n_x(); ++i) a[i] += scale * column[i];
  }
  const SpatialField integral = symmetric_cumulative_integral(a, grid.dx());
  PerSpecies<SpatialField> out;
  for (std::size_t s = 0; s < kNumSpecies; ++s) {
    out[s].resize(grid.n_x());
    for (std::size_t i = 0; i < grid.n_x(); ++i) out[s][i] = -species[s].sign * integral[i];
  }
  return out;
}

CreationStats create_reaction_source_particles(SpeciesParticles& lambda, OccupationTensor& tensor,
                                               const TrackingWeights& weights,
                                               const SpatialField& reaction, double t, double dt,
                                               RandomStream& rng) {
  const PhaseGrid& grid = tensor.grid();
  const double volume = grid.cell_volume();
  const double hx = 0.5 * grid.dx();
  const double hv = 0.5 * grid.dv();
  CreationStats stats;
  for (std::size_t i = 0; i < grid.n_x(); ++i) {
    const double reaction_mass = reaction[i] * volume;
    for (std::size_t l = 0; l < grid.n_v(); ++l) {
      for (std::size_t m = 0; m < grid.n_v(); ++m) {
        const double mass = (weights.theta_cell_mass(t, grid, i, l, m) - reaction_mass) * dt;
        if (mass <= 0.0) {
          if (mass < 0.0) {
            ++stats.clamped_cells;
            stats.clamped_mass -= mass;
          }
          continue;
        }
        const double expected = mass / lambda.weight;
        const double whole = std::floor(expected);
        std::size_t count = static_cast<std::size_t>(whole);
        if (rng.bernoulli(expected - whole)) ++count;
        if (count == 0) continue;
        const double x = grid.x_center(i);
        const double v1 = grid.v_center(l);
        const double v2 = grid.v_center(m);
        for (std::size_t c = 0; c < count; ++c) {
          Particle p{wrap_position(rng.uniform(x - hx, x + hx), grid.p_max()), rng.uniform(v1 - hv, v1 + hv),
                     rng.uniform(v2 - hv, v2 + hv)};
          lambda.particles.push_back(p);
          if (const auto cell = cell_index(p, grid)) {
            tensor(cell->i, cell->l, cell->m) += 1.0;
          } else {
            tensor.escaped()[spatial_cell(p.x, grid)] += 1.0;
          }
        }
        stats.created += count;
        stats.created_mass += static_cast<double>(count) * lambda.weight;
      }
    }
  }
  return stats;
}

AdjointTrajectory adjoint_solve(const ForwardTrajectory& fwd, const ForwardSetup& setup,
                                const ControlField& control,
                                const PerSpecies<TrackingWeights>& weights,
                                const AdjointOptions& options, std::uint64_t seed) {
  const PhaseGrid& grid = setup.grid;
  const TimeGrid& time = setup.time;
  const std::size_t n_t = time.n_t();
  const bool particle_form = options.estimator == DerivativeEstimator::particle;
  if (fwd.electric.size() != n_t + 1 || (particle_form ? fwd.particles.size() : fwd.tensors.size()) != n_t + 1) {
    throw std::invalid_argument("adjoint_solve: forward trajectory lacks stored steps for the chosen estimator");
  }

  AdjointTrajectory adj;
  adj.tensors.resize(n_t + 1, PerSpecies<OccupationTensor>{OccupationTensor(grid), OccupationTensor(grid)});
  adj.stats.resize(n_t + 1);
  PerSpecies<SpeciesParams> params;
  PerSpecies<SpeciesParticles>& state = adj.final;
  for (std::size_t s = 0; s < kNumSpecies; ++s) {
    params[s] = setup.species[s].params;
    adj.weights[s] = adjoint_particle_weight(weights[s], options, time.t_final());
    auto rng = RandomStream::substream(seed, StreamPurpose::adjoint_terminal, s);
    state[s] = terminal_condition(weights[s], params[s], options.n_terminal, adj.weights[s], grid.p_max(), rng);
    adj.tensors[n_t][s] = assemble_occupation(state[s].particles, grid, options.threads);
    adj.stats[n_t].n_lambda[s] = state[s].size();
  }

  const double dt = time.dt();
  for (std::size_t k = n_t; k-- > 0;) {
    const SpatialField& e = fwd.electric[k];
    const std::vector<double> b = control.step_values(k);
    auto field_at = [&](double x) {
      return LocalFields{interpolate_periodic(e, x, grid), interpolate_periodic(b, x, grid)};
    };
    PerSpecies<OccupationTensor>& lam = adj.tensors[k];
    for (std::size_t s = 0; s < kNumSpecies; ++s) {
      auto& particles = state[s].particles;
      parallel_chunks(particles.size(), options.threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
          particles[p] = boris_push_reverse(particles[p], field_at, params[s], dt, grid.p_max());
        }
      });
      lam[s] = assemble_occupation(particles, grid, options.threads);
    }
    if (options.creation) {
      const PerSpecies<SpatialField> reaction =
          particle_form
              ? reaction_field_particles(lam, adj.weights, fwd.particles[k], fwd.weights, params, options.stencil)
              : reaction_field(lam, adj.weights, fwd.tensors[k], fwd.weights, params, options.stencil);
      for (std::size_t s = 0; s < kNumSpecies; ++s) {
        auto rng = RandomStream::substream(seed, StreamPurpose::adjoint_creation, 2 * k + s);
        adj.stats[k].creation[s] =
            create_reaction_source_particles(state[s], lam[s], weights[s], reaction[s], time.t(k), dt, rng);
      }
    }
    for (std::size_t s = 0; s < kNumSpecies; ++s) adj.stats[k].n_lambda[s] = state[s].size();
  }
  const std::size_t clamped = adj.total_clamped_cells();
  if (clamped > 0) {
    spdlog::debug("adjoint sweep clamped {} negative source cells; consider larger C_theta", clamped);
  }
  return adj;
}

}  // namespace vlasov
