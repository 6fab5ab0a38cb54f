#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "vlasov/control.hpp"
#include "vlasov/domain.hpp"
#include "vlasov/fields.hpp"
#include "vlasov/sampling.hpp"

namespace vlasov {

template <class T>
using PerSpecies = std::array<T, kNumSpecies>;

struct SpeciesSetup {
  SpeciesParams params;
  DensitySpec initial;
  std::size_t n_particles = 0;
  /// Integral of the initial density; every particle carries total_mass / n_particles.
  double total_mass = 1.0;
  /// Static background: sampled once and never pushed.
  bool frozen = false;
};

struct ForwardSetup {
  PhaseGrid grid;
  TimeGrid time;
  PerSpecies<SpeciesSetup> species;  // indexed by Species
  double neutrality_tol = 1e-10;
  /// Escaped fraction above which the run is aborted.
  double max_escape_fraction = 0.01;
  std::size_t threads = 1;
};

/// Samples both species from the initial-particles substream of `seed`.
PerSpecies<SpeciesParticles> initial_particles(const ForwardSetup& setup, std::uint64_t seed);

enum class StoragePolicy { none, tensors, particles };

/// Per-step scalars. All vectors have n_t + 1 entries.
struct DiagnosticsSeries {
  std::vector<double> t;
  std::vector<double> electric_energy;
  PerSpecies<std::vector<double>> mean_x;
  PerSpecies<std::vector<double>> var_x;
  PerSpecies<std::vector<double>> max_deviation;
  /// sum rho dx and sum |rho| dx per step.
  std::vector<double> net_charge;
  std::vector<double> absolute_charge;
  PerSpecies<std::vector<double>> escaped;
  PerSpecies<std::vector<std::size_t>> particle_count;
};

struct ForwardTrajectory {
  TimeGrid time;
  PhaseGrid grid;
  PerSpecies<double> weights{};
  /// E^k for k = 0..n_t.
  std::vector<SpatialField> electric;
  /// Occupation tensors per step (StoragePolicy::tensors or ::particles).
  std::vector<PerSpecies<OccupationTensor>> tensors;
  /// Particle snapshots per step (StoragePolicy::particles).
  std::vector<PerSpecies<std::vector<Particle>>> particles;
  PerSpecies<SpeciesParticles> initial;
  PerSpecies<SpeciesParticles> final;
  DiagnosticsSeries diagnostics;
};

/// State handed to step observers, before the push of step k (k = n_t is the final state).
struct StepView {
  std::size_t k;
  double t;
  const PerSpecies<SpeciesParticles>& species;
  const SpatialField& electric;
  const PerSpecies<OccupationTensor>& tensors;
};
using StepObserver = std::function<void(const StepView&)>;

/// Marches the two-species system from the given particles: at every step the
/// occupation tensors and the electric field are assembled, then each
/// non-frozen particle takes a Boris step with E^k and the mid-step control
/// interpolated at its position.
ForwardTrajectory forward_solve(const ForwardSetup& setup, PerSpecies<SpeciesParticles> start,
                                const ControlField& control,
                                StoragePolicy storage = StoragePolicy::none,
                                const StepObserver& observer = {});

/// Mean, variance and maximal deviation from p_max / 2 of the positions.
struct PositionMoments {
  double mean = 0.0;
  double variance = 0.0;
  double max_deviation = 0.0;
};
PositionMoments position_moments(std::span<const Particle> particles, double p_max);

/// sum_i E_i^2 dx
double electric_energy(std::span<const double> e, double dx);

/// Recomputes the diagnostics of a trajectory stored with StoragePolicy::particles.
DiagnosticsSeries diagnostics(const ForwardTrajectory& traj);

}  // namespace vlasov
