#include "vlasov/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vlasov/errors.hpp"

namespace vlasov {

std::vector<std::size_t> local_maxima(std::span<const double> t, std::span<const double> e, double t0,
                                      double t1) {
  std::vector<std::size_t> out;
  for (std::size_t j = 1; j + 1 < e.size(); ++j) {
    if (t[j] < t0 || t[j] > t1) continue;
    if (e[j] > e[j - 1] && e[j] >= e[j + 1]) out.push_back(j);
  }
  return out;
}

DampingFit fit_damping_rate(std::span<const double> t, std::span<const double> energy, double t0,
                            double t1, bool envelope_only) {
  if (t.size() != energy.size()) throw std::invalid_argument("fit_damping_rate: size mismatch");
  if (!(t0 < t1)) throw std::invalid_argument("fit_damping_rate: empty window");
  double lo = INFINITY;
  double hi = -INFINITY;
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (t[j] < t0 || t[j] > t1) continue;
    lo = std::min(lo, energy[j]);
    hi = std::max(hi, energy[j]);
  }
  if (hi >= lo && hi - lo <= 1e-12 * std::abs(hi)) return DampingFit{0.0, 1.0, 0};

  auto peaks = local_maxima(t, energy, t0, t1);
  if (envelope_only) {
    for (std::size_t j = 1; j < peaks.size(); ++j) {
      if (energy[peaks[j]] >= energy[peaks[j - 1]]) {
        peaks.resize(j);
        break;
      }
    }
  }
  if (peaks.size() < 3) {
    throw InsufficientPeaks("fit_damping_rate: found " + std::to_string(peaks.size()) +
                            " local maxima in the fit window, need 3");
  }
  const double n = static_cast<double>(peaks.size());
  double st = 0.0, sy = 0.0;
  for (std::size_t j : peaks) {
    if (!(energy[j] > 0.0)) throw InsufficientPeaks("fit_damping_rate: non-positive peak value");
    st += t[j];
    sy += std::log(energy[j]);
  }
  const double mt = st / n;
  const double my = sy / n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t j : peaks) {
    const double dt = t[j] - mt;
    const double dy = std::log(energy[j]) - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  const double slope = sty / stt;
  DampingFit fit;
  fit.rate = -slope;
  fit.peaks = peaks.size();
  fit.r_squared = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
  return fit;
}

GrowthSummary growth_factor(std::span<const double> t, std::span<const double> energy) {
  GrowthSummary g;
  if (energy.empty() || !(energy[0] > 0.0)) return g;
  for (std::size_t k = 0; k < energy.size(); ++k) {
    const double r = energy[k] / energy[0];
    if (r > g.factor) {
      g.factor = r;
      g.k_max = k;
      g.t_max = t[k];
    }
  }
  const double half = 0.5 * g.factor * energy[0];
  for (std::size_t k = 1; k + 1 < energy.size(); ++k) {
    if (energy[k] >= half && energy[k] > energy[k - 1] && energy[k] >= energy[k + 1]) {
      g.k_saturation = k;
      break;
    }
  }
  if (g.k_saturation == 0) g.k_saturation = g.k_max;
  g.t_saturation = t[g.k_saturation];
  g.factor_at_saturation = energy[g.k_saturation] / energy[0];
  return g;
}

double beam_sign_correlation(std::span<const Particle> initial, std::span<const Particle> current) {
  if (initial.size() != current.size()) throw std::invalid_argument("beam_sign_correlation: size mismatch");
  if (initial.empty()) return 0.0;
  const double n = static_cast<double>(initial.size());
  double sa = 0.0, sb = 0.0, sab = 0.0;
  for (std::size_t p = 0; p < initial.size(); ++p) {
    const double a = initial[p].v1 >= 0.0 ? 1.0 : -1.0;
    const double b = current[p].v1 >= 0.0 ? 1.0 : -1.0;
    sa += a;
    sb += b;
    sab += a * b;
  }
  const double va = 1.0 - (sa / n) * (sa / n);
  const double vb = 1.0 - (sb / n) * (sb / n);
  if (va <= 0.0 || vb <= 0.0) return 1.0;
  return (sab / n - (sa / n) * (sb / n)) / std::sqrt(va * vb);
}

double beam_mixing_correlation(std::span<const Particle> initial, std::span<const Particle> current,
                               const PhaseGrid& grid) {
  if (initial.size() != current.size()) throw std::invalid_argument("beam_mixing_correlation: size mismatch");
  if (initial.empty()) return 0.0;
  const std::size_t nv = grid.n_v();
  std::vector<double> count(grid.n_x() * (nv + 2), 0.0);
  std::vector<double> sum(count.size(), 0.0);
  auto bin = [&](const Particle& p) {
    const std::size_t i = spatial_cell(p.x, grid);
    const double s = std::floor((p.v1 + grid.v_max()) / grid.dv());
    // out-of-mesh velocities get their own bins at either end
    const std::size_t l = s < 0.0 ? 0 : (s >= static_cast<double>(nv) ? nv + 1 : static_cast<std::size_t>(s) + 1);
    return i * (nv + 2) + l;
  };
  double total = 0.0;
  for (std::size_t p = 0; p < initial.size(); ++p) {
    const double a = initial[p].v1 >= 0.0 ? 1.0 : -1.0;
    const std::size_t b = bin(current[p]);
    count[b] += 1.0;
    sum[b] += a;
    total += a;
  }
  const double n = static_cast<double>(initial.size());
  const double mean = total / n;
  const double var_total = 1.0 - mean * mean;
  if (var_total <= 0.0) return 1.0;
  double between = 0.0;
  for (std::size_t b = 0; b < count.size(); ++b) {
    if (count[b] == 0.0) continue;
    const double mb = sum[b] / count[b];
    between += count[b] * (mb - mean) * (mb - mean);
  }
  return std::sqrt(between / n / var_total);
}

}  // namespace vlasov
