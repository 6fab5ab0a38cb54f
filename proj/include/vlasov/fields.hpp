#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vlasov/domain.hpp"

namespace vlasov {

/// Grid function sampled at the spatial cell centres.
using SpatialField = std::vector<double>;

/// Counts particles per phase-space cell; particles outside the velocity mesh
/// go to the per-column escape tally. Per-thread partial tensors are merged in
/// thread order, and counts are integers, so the result does not depend on
/// `threads`.
OccupationTensor assemble_occupation(std::span<const Particle> particles, const PhaseGrid& grid,
                                     std::size_t threads = 1);

/// rho_i = (w_ions * n_ions(i) - w_electrons * n_electrons(i)) / dx, where n(i)
/// counts every particle in spatial cell i including velocity escapes.
/// Throws GridMismatch if the tensors live on different grids.
SpatialField charge_density(const OccupationTensor& ions, const OccupationTensor& electrons,
                            double ion_weight, double electron_weight);

/// Symmetrised cumulative integral
///   F_i = 1/2 ( sum_{j<i} a_j dx - sum_{j>i} a_j dx ),
/// which is the midpoint value of 1/2 (int_0^x a - int_x^L a) for piecewise
/// constant a. Left sums run in ascending and right sums in descending order.
SpatialField symmetric_cumulative_integral(std::span<const double> a, double dx);

/// Electric field of a neutral charge density. Throws NeutralityViolated when
/// |sum rho dx| > tol * sum |rho| dx.
SpatialField electric_field(std::span<const double> rho, double dx, double neutrality_tol = 1e-10);

/// Total charge sum rho dx and the absolute mass sum |rho| dx.
struct ChargeBalance {
  double net = 0.0;
  double absolute = 0.0;
};
ChargeBalance charge_balance(std::span<const double> rho, double dx);

}  // namespace vlasov
