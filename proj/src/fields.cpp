#include "vlasov/fields.hpp"

#include <cmath>
#include <string>

#include "vlasov/errors.hpp"
#include "vlasov/parallel.hpp"

namespace vlasov {

namespace {

void tally(std::span<const Particle> particles, OccupationTensor& tensor) {
  const PhaseGrid& grid = tensor.grid();
  for (const Particle& p : particles) {
    if (const auto c = cell_index(p, grid)) {
      tensor(c->i, c->l, c->m) += 1.0;
    } else {
      tensor.escaped()[spatial_cell(p.x, grid)] += 1.0;
    }
  }
}

}  // namespace

OccupationTensor assemble_occupation(std::span<const Particle> particles, const PhaseGrid& grid,
                                     std::size_t threads) {
  OccupationTensor result(grid);
  if (threads <= 1 || particles.size() < 4096) {
    tally(particles, result);
    return result;
  }
  std::vector<OccupationTensor> partial(threads, OccupationTensor(grid));
  parallel_chunks(particles.size(), threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    tally(particles.subspan(begin, end - begin), partial[c]);
  });
  for (const auto& part : partial) {
    for (std::size_t j = 0; j < result.counts().size(); ++j) result.counts()[j] += part.counts()[j];
    for (std::size_t i = 0; i < grid.n_x(); ++i) result.escaped()[i] += part.escaped()[i];
  }
  return result;
}

SpatialField charge_density(const OccupationTensor& ions, const OccupationTensor& electrons,
                            double ion_weight, double electron_weight) {
  if (!(ions.grid() == electrons.grid())) {
    throw GridMismatch("charge_density: ion and electron tensors live on different grids");
  }
  const PhaseGrid& grid = ions.grid();
  SpatialField rho(grid.n_x());
  for (std::size_t i = 0; i < grid.n_x(); ++i) {
    const double n_ions = ions.column_sum(i) + ions.escaped()[i];
    const double n_electrons = electrons.column_sum(i) + electrons.escaped()[i];
    rho[i] = (ion_weight * n_ions - electron_weight * n_electrons) / grid.dx();
  }
  return rho;
}

SpatialField symmetric_cumulative_integral(std::span<const double> a, double dx) {
  const std::size_t n = a.size();
  SpatialField left(n, 0.0);
  SpatialField right(n, 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    left[i] = acc;
    acc += a[i] * dx;
  }
  acc = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    right[i] = acc;
    acc += a[i] * dx;
  }
  SpatialField out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (left[i] - right[i]);
  return out;
}

ChargeBalance charge_balance(std::span<const double> rho, double dx) {
  ChargeBalance b;
  for (double r : rho) {
    b.net += r * dx;
    b.absolute += std::abs(r) * dx;
  }
  return b;
}

SpatialField electric_field(std::span<const double> rho, double dx, double neutrality_tol) {
  const ChargeBalance b = charge_balance(rho, dx);
  if (std::abs(b.net) > neutrality_tol * b.absolute) {
    throw NeutralityViolated("electric_field: net charge " + std::to_string(b.net) +
                             " exceeds tolerance relative to " + std::to_string(b.absolute));
  }
  return symmetric_cumulative_integral(rho, dx);
}

}  // namespace vlasov
