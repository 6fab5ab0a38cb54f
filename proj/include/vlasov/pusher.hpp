#pragma once

#include <span>

#include "vlasov/domain.hpp"

namespace vlasov {

/// Electric field and magnetic control interpolated to one particle position.
struct LocalFields {
  double e = 0.0;
  double b = 0.0;
};

/// Velocity part of the Boris step (half electric kick, magnetic rotation,
/// half electric kick) with the 3-vector embedding E = (e, 0, 0), B = (0, 0, b).
/// The electric kicks use charge mu_v and the rotation uses mu_x * mu_v, which
/// makes the step consistent with
///   x' = mu_x v1,  v1' = mu_v e + mu_x mu_v v2 b,  v2' = -mu_x mu_v v1 b.
void boris_kick(Particle& p, LocalFields fields, const SpeciesParams& species, double dt);

/// One full Boris step: kick, then drift x += mu_x v1 dt with periodic wrap.
Particle boris_push(Particle p, LocalFields fields, const SpeciesParams& species, double dt,
                    double p_max);

/// Exact inverse of boris_push: drift back with the current velocity, then undo
/// the kick with the fields at the recovered position. `field_at(x)` returns
/// the LocalFields at position x.
template <class FieldAt>
Particle boris_push_reverse(Particle p, FieldAt&& field_at, const SpeciesParams& species, double dt,
                            double p_max) {
  p.x = wrap_position(p.x - species.mu_x * p.v1 * dt, p_max);
  boris_kick(p, field_at(p.x), species, -dt);
  return p;
}

/// Linear interpolation between cell centres with periodic closure.
double interpolate_periodic(std::span<const double> values, double x, const PhaseGrid& grid);

}  // namespace vlasov
