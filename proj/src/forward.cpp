#include "vlasov/forward.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "vlasov/errors.hpp"
#include "vlasov/parallel.hpp"
#include "vlasov/pusher.hpp"

namespace vlasov {

PerSpecies<SpeciesParticles> initial_particles(const ForwardSetup& setup, std::uint64_t seed) {
  PerSpecies<SpeciesParticles> out;
  for (std::size_t s = 0; s < kNumSpecies; ++s) {
    const SpeciesSetup& sp = setup.species[s];
    if (sp.n_particles == 0) throw std::invalid_argument("species needs at least one particle");
    auto rng = RandomStream::substream(seed, StreamPurpose::initial_particles, s);
    out[s].species = sp.params;
    out[s].particles = sample(sp.initial, sp.n_particles, setup.grid.p_max(), rng);
    out[s].weight = sp.total_mass / static_cast<double>(sp.n_particles);
  }
  return out;
}

PositionMoments position_moments(std::span<const Particle> particles, double p_max) {
  PositionMoments m;
  if (particles.empty()) return m;
  const double center = 0.5 * p_max;
  double sum = 0.0;
  for (const Particle& p : particles) {
    sum += p.x;
    m.max_deviation = std::max(m.max_deviation, std::abs(p.x - center));
  }
  const double n = static_cast<double>(particles.size());
  m.mean = sum / n;
  double sq = 0.0;
  for (const Particle& p : particles) sq += (p.x - m.mean) * (p.x - m.mean);
  m.variance = sq / n;
  return m;
}

double electric_energy(std::span<const double> e, double dx) {
  double s = 0.0;
  for (double v : e) s += v * v * dx;
  return s;
}

namespace {

void record(DiagnosticsSeries& d, double t, const SpatialField& e, const SpatialField& rho,
            const PerSpecies<SpeciesParticles>& species, const PerSpecies<OccupationTensor>& tensors,
            const PhaseGrid& grid) {
  d.t.push_back(t);
  d.electric_energy.push_back(electric_energy(e, grid.dx()));
  const ChargeBalance b = charge_balance(rho, grid.dx());
  d.net_charge.push_back(b.net);
  d.absolute_charge.push_back(b.absolute);
  for (std::size_t s = 0; s < kNumSpecies; ++s) {
    const PositionMoments m = position_moments(species[s].particles, grid.p_max());
    d.mean_x[s].push_back(m.mean);
    d.var_x[s].push_back(m.variance);
    d.max_deviation[s].push_back(m.max_deviation);
    d.escaped[s].push_back(tensors[s].escaped_total());
    d.particle_count[s].push_back(species[s].size());
  }
}

}  // namespace

ForwardTrajectory forward_solve(const ForwardSetup& setup, PerSpecies<SpeciesParticles> start,
                                const ControlField& control, StoragePolicy storage,
                                const StepObserver& observer) {
  const PhaseGrid& grid = setup.grid;
  const TimeGrid& time = setup.time;
  if (!(control.grid == grid) || !(control.time == time)) {
    throw GridMismatch("forward_solve: control lattice does not match the simulation grids");
  }

  ForwardTrajectory traj{time, grid, {}, {}, {}, {}, start, start, {}};
  for (std::size_t s = 0; s < kNumSpecies; ++s) traj.weights[s] = start[s].weight;
  PerSpecies<SpeciesParticles>& state = traj.final;
  traj.electric.reserve(time.n_t() + 1);

  bool warned_escape = false;
  for (std::size_t k = 0;; ++k) {
    PerSpecies<OccupationTensor> tensors{assemble_occupation(state[0].particles, grid, setup.threads),
                                         assemble_occupation(state[1].particles, grid, setup.threads)};
    for (std::size_t s = 0; s < kNumSpecies; ++s) {
      const double escaped = tensors[s].escaped_total();
      if (escaped > 0.0 && !warned_escape) {
        spdlog::warn("step {}: {} {} particle(s) outside the velocity mesh", k, escaped,
                     name(static_cast<Species>(s)));
        warned_escape = true;
      }
      if (escaped > setup.max_escape_fraction * static_cast<double>(state[s].size())) {
        throw EscapeThresholdExceeded("step " + std::to_string(k) + ": " + std::to_string(escaped) + " " +
                                      name(static_cast<Species>(s)) +
                                      " particles left the velocity mesh");
      }
    }
    const SpatialField rho = charge_density(tensors[to_index(Species::ions)],
                                            tensors[to_index(Species::electrons)],
                                            state[to_index(Species::ions)].weight,
                                            state[to_index(Species::electrons)].weight);
    SpatialField e = electric_field(rho, grid.dx(), setup.neutrality_tol);

    record(traj.diagnostics, time.t(k), e, rho, state, tensors, grid);
    if (observer) observer(StepView{k, time.t(k), state, e, tensors});
    if (storage == StoragePolicy::particles) {
      traj.particles.push_back({state[0].particles, state[1].particles});
    }
    if (storage != StoragePolicy::none) traj.tensors.push_back(tensors);
    traj.electric.push_back(e);

    if (k == time.n_t()) break;

    const std::vector<double> b = control.step_values(k);
    const double dt = time.dt();
    for (std::size_t s = 0; s < kNumSpecies; ++s) {
      if (setup.species[s].frozen) continue;
      auto& particles = state[s].particles;
      const SpeciesParams& params = state[s].species;
      parallel_chunks(particles.size(), setup.threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
          const LocalFields f{interpolate_periodic(e, particles[p].x, grid),
                              interpolate_periodic(b, particles[p].x, grid)};
          particles[p] = boris_push(particles[p], f, params, dt, grid.p_max());
        }
      });
    }
  }
  return traj;
}

DiagnosticsSeries diagnostics(const ForwardTrajectory& traj) {
  if (traj.particles.size() != traj.electric.size()) {
    throw std::invalid_argument("diagnostics: trajectory has no particle snapshots");
  }
  DiagnosticsSeries d;
  const PhaseGrid& grid = traj.grid;
  for (std::size_t k = 0; k < traj.electric.size(); ++k) {
    PerSpecies<SpeciesParticles> species;
    for (std::size_t s = 0; s < kNumSpecies; ++s) {
      species[s].particles = traj.particles[k][s];
      species[s].weight = traj.weights[s];
    }
    PerSpecies<OccupationTensor> tensors{assemble_occupation(species[0].particles, grid),
                                         assemble_occupation(species[1].particles, grid)};
    const SpatialField rho = charge_density(tensors[1], tensors[0], traj.weights[1], traj.weights[0]);
    record(d, traj.time.t(k), traj.electric[k], rho, species, tensors, grid);
  }
  return d;
}

}  // namespace vlasov
