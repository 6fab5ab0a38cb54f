#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "vlasov/domain.hpp"

namespace vlasov {

using PhasePoint = std::array<double, 3>;  // (x, v1, v2)

/// Negative Gaussian tracking potentials of one species:
///   theta(t, z) = -C_theta N(z; z_d(t), Sigma_theta),  phi(z) = -C_phi N(z; z_T, Sigma_phi)
/// with diagonal covariances (variances per axis) and a piecewise-linear target path z_d.
struct TrackingWeights {
  double c_theta = 0.0;
  PhasePoint cov_theta{1.0, 1.0, 1.0};
  /// Knot times of z_d; a single knot gives a constant path.
  std::vector<double> path_times{0.0};
  std::vector<PhasePoint> path_points{PhasePoint{0.0, 0.0, 0.0}};

  double c_phi = 0.0;
  PhasePoint cov_phi{1.0, 1.0, 1.0};
  PhasePoint terminal_target{0.0, 0.0, 0.0};

  void validate() const;
  PhasePoint target(double t) const;
  double theta(double t, const Particle& z) const;
  double phi(const Particle& z) const;
  /// int over cell (i, l, m) of |theta(t, .)|, from products of erf differences.
  double theta_cell_mass(double t, const PhaseGrid& grid, std::size_t i, std::size_t l,
                         std::size_t m) const;

  bool operator==(const TrackingWeights&) const = default;
};

/// Gaussian N(z; mean, diag(cov)) in three dimensions.
double gaussian3(const Particle& z, const PhasePoint& mean, const PhasePoint& cov);

/// Mass of N(mean, variance) inside [lo, hi).
double gaussian_interval_mass(double lo, double hi, double mean, double variance);

}  // namespace vlasov
