#pragma once

#include <span>
#include <vector>

#include "vlasov/domain.hpp"

namespace vlasov {

struct DampingFit {
  /// Decay rate gamma of E(t) (positive for decay).
  double rate = 0.0;
  double r_squared = 0.0;
  std::size_t peaks = 0;
};

/// Indices j with e[j-1] < e[j] >= e[j+1] and t[j] in [t0, t1].
std::vector<std::size_t> local_maxima(std::span<const double> t, std::span<const double> e, double t0,
                                      double t1);

/// Least-squares slope of log E through its local maxima inside [t0, t1].
/// With `envelope_only` the maxima sequence is cut at the first maximum that is
/// not below its predecessor, so a noise floor or recurrence does not enter
/// the fit. A constant signal yields rate 0. Throws InsufficientPeaks with
/// fewer than 3 maxima.
DampingFit fit_damping_rate(std::span<const double> t, std::span<const double> energy, double t0,
                            double t1, bool envelope_only = false);

/// Growth of E(t)/E(0). Saturation is the first local maximum reaching half
/// of the overall maximum.
struct GrowthSummary {
  double factor = 0.0;
  std::size_t k_max = 0;
  double t_max = 0.0;
  double factor_at_saturation = 0.0;
  std::size_t k_saturation = 0;
  double t_saturation = 0.0;
};
GrowthSummary growth_factor(std::span<const double> t, std::span<const double> energy);

/// Pearson correlation between sign(v1) at t = 0 and sign(v1) now, over one
/// species' particles: 1 while every particle stays in its beam, about 0 once
/// the two populations are interleaved.
double beam_sign_correlation(std::span<const Particle> initial, std::span<const Particle> current);

/// Correlation ratio between a particle's initial beam sign(v1(0)) and the mean
/// initial sign of the particles sharing its current (x, v1) cell. 1 while the
/// beams occupy disjoint cells, towards 0 once the populations interleave.
double beam_mixing_correlation(std::span<const Particle> initial, std::span<const Particle> current,
                               const PhaseGrid& grid);

}  // namespace vlasov
