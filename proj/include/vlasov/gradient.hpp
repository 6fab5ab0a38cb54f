#pragma once

#include <cstdint>
#include <memory>

#include "vlasov/adjoint.hpp"
#include "vlasov/control.hpp"
#include "vlasov/forward.hpp"
#include "vlasov/tracking.hpp"

namespace vlasov {

struct PenaltyConfig {
  double alpha = 1e-3;
  double kappa_t = 1.0;
  double kappa_x = 1.0;

  void validate() const;
  bool operator==(const PenaltyConfig&) const = default;
};

/// Trapezoid weight of time level k in [0, n_t].
double time_weight(std::size_t k, std::size_t n_t);

/// (u, w)_L2 = sum_k w_k dt sum_i dx u w.
double inner_L2(const Lattice& u, const Lattice& w, const TimeGrid& time, const PhaseGrid& grid);

/// (u, w)_V = (u, w)_L2 + kappa_t sum_{k<n_t} dt dx (D_t u)(D_t w)
///          + kappa_x sum_k w_k dt sum_{i<n_x-1} dx (D_x u)(D_x w)
/// with forward differences D_t, D_x.
double inner_V(const Lattice& u, const Lattice& w, const TimeGrid& time, const PhaseGrid& grid,
               const PenaltyConfig& penalty);

/// (I - kappa_t D_tt - kappa_x D_xx) u with mirrored ghost values: node-centred in
/// time (u^{-1} = u^1, u^{n_t+1} = u^{n_t-1}), cell-centred in x (u_{-1} = u_0).
Lattice apply_elliptic(const Lattice& u, const TimeGrid& time, const PhaseGrid& grid,
                       double kappa_t, double kappa_x);

/// How the velocity integral in G is discretised.
enum class GradientScaling {
  /// Densities from particle weights, velocities at cell centres, dv^2 quadrature.
  continuum,
  /// Raw counts and raw (1-based) indices l, m, multiplied by dv^2 dt.
  raw_index,
};

struct GradientOptions {
  VelocityStencil stencil = VelocityStencil::central;
  DerivativeEstimator estimator = DerivativeEstimator::particle;
  GradientScaling scaling = GradientScaling::continuum;

  bool operator==(const GradientOptions&) const = default;
};

/// G(t_k, x_i) = sum_s mu_x mu_v sum_{l,m} lambda (v2 d_{v1} f - v1 d_{v2} f) dv^2,
/// the L2 derivative of the tracking part of the reduced cost.
Lattice assemble_G(const std::vector<PerSpecies<OccupationTensor>>& f,
                   const PerSpecies<double>& f_weights,
                   const std::vector<PerSpecies<OccupationTensor>>& lambda,
                   const PerSpecies<double>& lambda_weights,
                   const PerSpecies<SpeciesParams>& species, const TimeGrid& time,
                   const GradientOptions& options = {});

/// Particle form: G(t_k, x_i) = -sum_s mu_x mu_v (w_f / dx)
///   sum_{p in cell i} (v2_p d_{v1} lambda - v1_p d_{v2} lambda)(z_p).
Lattice assemble_G_particles(const std::vector<PerSpecies<std::vector<Particle>>>& f_particles,
                             const PerSpecies<double>& f_weights,
                             const std::vector<PerSpecies<OccupationTensor>>& lambda,
                             const PerSpecies<double>& lambda_weights,
                             const PerSpecies<SpeciesParams>& species, const TimeGrid& time,
                             VelocityStencil stencil);

/// alpha (I - kappa_t D_tt - kappa_x D_xx) B + G
Lattice assemble_grad_L2(const Lattice& G, const ControlField& control, const PenaltyConfig& penalty);

/// Riesz map from L2 to V: solves M u = W g, where W is the L2 weight matrix and
/// M the V Gram matrix. Equivalent to (I - kappa_t D_tt - kappa_x D_xx) u = g.
/// The sparse factorisation is computed once per lattice and penalty.
class EllipticLift {
 public:
  EllipticLift(const TimeGrid& time, const PhaseGrid& grid, const PenaltyConfig& penalty);
  ~EllipticLift();
  EllipticLift(EllipticLift&&) noexcept;
  EllipticLift& operator=(EllipticLift&&) noexcept;

  Lattice solve(const Lattice& grad_L2) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Lattice lift_to_V(const Lattice& grad_L2, const TimeGrid& time, const PhaseGrid& grid,
                  const PenaltyConfig& penalty);

struct GradientField {
  Lattice G;
  Lattice grad_L2;
  Lattice grad_V;
};

struct CostBreakdown {
  double tracking = 0.0;  // sum_k dt sum_p w theta
  double terminal = 0.0;  // sum_p w phi at t = T
  double penalty = 0.0;   // alpha/2 |B|_V^2
  double total() const { return tracking + terminal + penalty; }
};

/// Accumulates the tracking and terminal terms while a forward solve runs.
class CostAccumulator {
 public:
  CostAccumulator(const PerSpecies<TrackingWeights>& weights, const TimeGrid& time);
  void operator()(const StepView& view);
  double tracking() const { return tracking_; }
  double terminal() const { return terminal_; }

 private:
  const PerSpecies<TrackingWeights>* weights_;
  TimeGrid time_;
  double tracking_ = 0.0;
  double terminal_ = 0.0;
};

/// Cost of a trajectory stored with StoragePolicy::particles.
CostBreakdown cost(const ForwardTrajectory& traj, const ControlField& control,
                   const PerSpecies<TrackingWeights>& weights, const PenaltyConfig& penalty);

/// Everything that defines the reduced cost B -> J(B).
struct ControlProblem {
  ForwardSetup forward;
  PerSpecies<TrackingWeights> tracking;
  PenaltyConfig penalty;
  AdjointOptions adjoint;
  GradientOptions gradient;
  std::uint64_t seed = 1;
};

struct CostEvaluation {
  CostBreakdown cost;
  ForwardTrajectory trajectory;
};

struct GradientEvaluation {
  CostBreakdown cost;
  GradientField gradient;
  /// Negative-source cells clamped during the adjoint sweep.
  std::size_t clamped_cells = 0;
};

/// Reduced cost with common random numbers: the initial particles are drawn
/// once and the adjoint substreams depend only on the seed, so repeated
/// evaluations at the same control are identical.
class ReducedCost {
 public:
  explicit ReducedCost(ControlProblem problem);

  const ControlProblem& problem() const { return problem_; }
  const PerSpecies<SpeciesParticles>& initial() const { return initial_; }
  ControlField zero_control() const;

  CostEvaluation evaluate(const ControlField& control,
                          StoragePolicy storage = StoragePolicy::none) const;
  GradientEvaluation gradient(const ControlField& control) const;
  double inner_V(const Lattice& u, const Lattice& w) const;

 private:
  ControlProblem problem_;
  PerSpecies<SpeciesParticles> initial_;
  EllipticLift lift_;
};

}  // namespace vlasov
