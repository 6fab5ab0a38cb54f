#include "vlasov/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vlasov {

double gaussian3(const Particle& z, const PhasePoint& mean, const PhasePoint& cov) {
  const double d0 = z.x - mean[0];
  const double d1 = z.v1 - mean[1];
  const double d2 = z.v2 - mean[2];
  const double q = d0 * d0 / cov[0] + d1 * d1 / cov[1] + d2 * d2 / cov[2];
  const double norm = std::sqrt(std::pow(2.0 * std::numbers::pi, 3) * cov[0] * cov[1] * cov[2]);
  return std::exp(-0.5 * q) / norm;
}

double gaussian_interval_mass(double lo, double hi, double mean, double variance) {
  const double scale = std::sqrt(2.0 * variance);
  // erfc differences keep precision in the far tails.
  const double a = (lo - mean) / scale;
  const double b = (hi - mean) / scale;
  if (a >= 0.0) return 0.5 * (std::erfc(a) - std::erfc(b));
  if (b <= 0.0) return 0.5 * (std::erfc(-b) - std::erfc(-a));
  return 0.5 * (std::erf(b) - std::erf(a));
}

void TrackingWeights::validate() const {
  if (c_theta < 0.0 || c_phi < 0.0) throw std::invalid_argument("tracking amplitudes must be >= 0");
  for (double c : cov_theta) {
    if (!(c > 0.0)) throw std::invalid_argument("cov_theta entries must be positive");
  }
  for (double c : cov_phi) {
    if (!(c > 0.0)) throw std::invalid_argument("cov_phi entries must be positive");
  }
  if (path_times.empty() || path_times.size() != path_points.size()) {
    throw std::invalid_argument("target path needs matching, non-empty knot times and points");
  }
  if (!std::is_sorted(path_times.begin(), path_times.end())) {
    throw std::invalid_argument("target path knot times must be sorted");
  }
}

PhasePoint TrackingWeights::target(double t) const {
  if (path_times.size() == 1 || t <= path_times.front()) return path_points.front();
  if (t >= path_times.back()) return path_points.back();
  const auto it = std::upper_bound(path_times.begin(), path_times.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - path_times.begin());
  const double w = (t - path_times[j - 1]) / (path_times[j] - path_times[j - 1]);
  PhasePoint out{};
  for (std::size_t a = 0; a < 3; ++a) out[a] = (1.0 - w) * path_points[j - 1][a] + w * path_points[j][a];
  return out;
}

double TrackingWeights::theta(double t, const Particle& z) const {
  if (c_theta == 0.0) return 0.0;
  return -c_theta * gaussian3(z, target(t), cov_theta);
}

double TrackingWeights::phi(const Particle& z) const {
  if (c_phi == 0.0) return 0.0;
  return -c_phi * gaussian3(z, terminal_target, cov_phi);
}

double TrackingWeights::theta_cell_mass(double t, const PhaseGrid& grid, std::size_t i, std::size_t l,
                                        std::size_t m) const {
  if (c_theta == 0.0) return 0.0;
  const PhasePoint c = target(t);
  const double hx = 0.5 * grid.dx();
  const double hv = 0.5 * grid.dv();
  const double x = grid.x_center(i);
  const double v1 = grid.v_center(l);
  const double v2 = grid.v_center(m);
  return c_theta * gaussian_interval_mass(x - hx, x + hx, c[0], cov_theta[0]) *
         gaussian_interval_mass(v1 - hv, v1 + hv, c[1], cov_theta[1]) *
         gaussian_interval_mass(v2 - hv, v2 + hv, c[2], cov_theta[2]);
}

}  // namespace vlasov
