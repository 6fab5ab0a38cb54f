#include "vlasov/pusher.hpp"

#include <cmath>

namespace vlasov {

void boris_kick(Particle& p, LocalFields fields, const SpeciesParams& species, double dt) {
  const double half = 0.5 * dt;
  const double kick = species.mu_v * fields.e * half;
  const double r = species.mu_x * species.mu_v * fields.b * half;
  const double s = 2.0 * r / (1.0 + r * r);

  // v- = v + qE dt/2
  const double m1 = p.v1 + kick;
  const double m2 = p.v2;
  // v' = v- + v- x r,  with r = (0, 0, r): v- x r = (m2 r, -m1 r, 0)
  const double p1 = m1 + m2 * r;
  const double p2 = m2 - m1 * r;
  // v+ = v- + v' x s
  p.v1 = m1 + p2 * s + kick;
  p.v2 = m2 - p1 * s;
}

Particle boris_push(Particle p, LocalFields fields, const SpeciesParams& species, double dt,
                    double p_max) {
  boris_kick(p, fields, species, dt);
  p.x = wrap_position(p.x + species.mu_x * p.v1 * dt, p_max);
  return p;
}

double interpolate_periodic(std::span<const double> values, double x, const PhaseGrid& grid) {
  const std::size_t n = grid.n_x();
  const double s = x / grid.dx() - 0.5;
  const double base = std::floor(s);
  const double frac = s - base;
  const auto n_signed = static_cast<long long>(n);
  long long i0 = static_cast<long long>(base) % n_signed;
  if (i0 < 0) i0 += n_signed;
  const auto lo = static_cast<std::size_t>(i0);
  const std::size_t hi = lo + 1 == n ? 0 : lo + 1;
  return (1.0 - frac) * values[lo] + frac * values[hi];
}

}  // namespace vlasov
