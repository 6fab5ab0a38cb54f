#pragma once

#include <cstdint>
#include <vector>

#include "vlasov/control.hpp"
#include "vlasov/forward.hpp"
#include "vlasov/tracking.hpp"

namespace vlasov {

/// Discrete velocity derivative of an occupation tensor. Both the reaction
/// term and the gradient integrand use the same stencil.
enum class VelocityStencil { forward, central };

/// (d/dv_axis counts)(i, l, m); axis 1 differentiates in l, axis 2 in m.
/// Forward differences close with a backward difference in the last cell,
/// central differences with one-sided ones at both ends.
double velocity_derivative(const OccupationTensor& t, std::size_t i, std::size_t l, std::size_t m,
                           int axis, VelocityStencil stencil);

/// How velocity integrals of the form int lambda d_v f dv are evaluated.
enum class DerivativeEstimator {
  /// Finite differences of the forward occupation tensor at cell centres.
  tensor,
  /// Integrated by parts, -int f d_v lambda dv: a sum over the forward
  /// particles of the adjoint density gradient, interpolated to each particle.
  particle,
};

/// Gradient (d/dv1, d/dv2) of a density given by an occupation tensor, at the
/// cell centres. Units: density per velocity.
struct VelocityGradient {
  std::vector<double> d1;
  std::vector<double> d2;
};
VelocityGradient velocity_gradient(const OccupationTensor& t, double weight, VelocityStencil stencil);

/// Bilinear interpolation in (v1, v2) of a cell-centred field inside spatial
/// column i, constant extrapolation at the velocity edges.
double interpolate_velocity(const std::vector<double>& field, const PhaseGrid& grid, std::size_t i, double v1,
                            double v2);

struct AdjointOptions {
  /// Particles representing the terminal condition -phi per species.
  std::size_t n_terminal = 20000;
  /// Mass per adjoint particle; 0 picks C_phi / n_terminal (or C_theta T / n_terminal
  /// when C_phi = 0).
  double particle_weight = 0.0;
  VelocityStencil stencil = VelocityStencil::central;
  DerivativeEstimator estimator = DerivativeEstimator::particle;
  /// Disable to get pure backward transport.
  bool creation = true;
  std::size_t threads = 1;

  bool operator==(const AdjointOptions&) const = default;
};

struct CreationStats {
  std::size_t created = 0;
  /// Cells where the reaction term exceeded the source (negative creation, clamped).
  std::size_t clamped_cells = 0;
  double clamped_mass = 0.0;
  double created_mass = 0.0;
};

struct AdjointStepStats {
  PerSpecies<std::size_t> n_lambda{};
  PerSpecies<CreationStats> creation{};
};

struct AdjointTrajectory {
  PerSpecies<double> weights{};
  /// Adjoint occupation tensors for k = 0..n_t.
  std::vector<PerSpecies<OccupationTensor>> tensors;
  /// Statistics per k (entry n_t describes the terminal condition).
  std::vector<AdjointStepStats> stats;
  PerSpecies<SpeciesParticles> final;

  std::size_t total_clamped_cells() const;
};

/// Per-species adjoint particle mass following AdjointOptions::particle_weight.
double adjoint_particle_weight(const TrackingWeights& w, const AdjointOptions& options, double t_final);

/// Samples n_terminal particles from |phi| / C_phi; the list represents lambda(T) = -phi.
/// Empty when C_phi = 0.
SpeciesParticles terminal_condition(const TrackingWeights& weights, const SpeciesParams& species,
                                    std::size_t n_terminal, double particle_weight, double p_max,
                                    RandomStream& rng);

/// Reaction term R^s(x_i) = -sign_s * I[a](x_i) with
///   a(x) = sum_s mu_v^s int lambda_s d_{v1} f_s dv
/// and I the symmetrised cumulative integral used for the electric field.
/// Tensors are converted to densities with their particle weights.
PerSpecies<SpatialField> reaction_field(const PerSpecies<OccupationTensor>& lambda,
                                        const PerSpecies<double>& lambda_weights,
                                        const PerSpecies<OccupationTensor>& f,
                                        const PerSpecies<double>& f_weights,
                                        const PerSpecies<SpeciesParams>& species,
                                        VelocityStencil stencil);

/// Particle form of the same integral: a(x_i) = -sum_s mu_v^s (w_f / dx) sum_{p in cell i} d_{v1} lambda_s(z_p).
PerSpecies<SpatialField> reaction_field_particles(const PerSpecies<OccupationTensor>& lambda,
                                                  const PerSpecies<double>& lambda_weights,
                                                  const PerSpecies<std::vector<Particle>>& f_particles,
                                                  const PerSpecies<double>& f_weights,
                                                  const PerSpecies<SpeciesParams>& species,
                                                  VelocityStencil stencil);

/// One Euler step of the source and reaction terms at time t: per cell, the
/// mass (int_cell |theta| - R_i |cell|) dt is converted to particles of the
/// list's weight (stochastic rounding) placed uniformly in the cell. Negative
/// amounts are not removed but counted as clamped. `tensor` is updated with
/// the new particles.
CreationStats create_reaction_source_particles(SpeciesParticles& lambda, OccupationTensor& tensor,
                                               const TrackingWeights& weights,
                                               const SpatialField& reaction, double t, double dt,
                                               RandomStream& rng);

/// Backward sweep k = n_t-1 .. 0: transport the adjoint particles with the
/// exact inverse Boris step (fields E^k and the mid-step control), then add
/// source and reaction particles. The forward trajectory must carry tensors,
/// and particle snapshots for DerivativeEstimator::particle.
AdjointTrajectory adjoint_solve(const ForwardTrajectory& fwd, const ForwardSetup& setup,
                                const ControlField& control,
                                const PerSpecies<TrackingWeights>& weights,
                                const AdjointOptions& options, std::uint64_t seed);

}  // namespace vlasov
