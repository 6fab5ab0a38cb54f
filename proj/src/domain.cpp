#include "vlasov/domain.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace vlasov {

const char* name(Species s) { return s == Species::electrons ? "electrons" : "ions"; }

void SpeciesParams::validate() const {
  if (sign != -1 && sign != 1) throw std::invalid_argument("species sign must be -1 or +1");
  if (!(mu_x > 0.0) || !std::isfinite(mu_x)) throw std::invalid_argument("mu_x must be positive");
  if (mu_v == 0.0 || !std::isfinite(mu_v)) throw std::invalid_argument("mu_v must be nonzero");
}

PhaseGrid::PhaseGrid(double p_max, double v_max, std::size_t n_x, std::size_t n_v)
    : p_max_(p_max), v_max_(v_max), n_x_(n_x), n_v_(n_v) {
  if (!(p_max > 0.0) || !std::isfinite(p_max)) throw std::invalid_argument("p_max must be positive");
  if (!(v_max > 0.0) || !std::isfinite(v_max)) throw std::invalid_argument("v_max must be positive");
  if (n_x < 2) throw std::invalid_argument("n_x must be at least 2");
  if (n_v < 2) throw std::invalid_argument("n_v must be at least 2");
  dx_ = p_max / static_cast<double>(n_x);
  dv_ = 2.0 * v_max / static_cast<double>(n_v);
}

TimeGrid::TimeGrid(double t_final, std::size_t n_t) : t_final_(t_final), n_t_(n_t) {
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("t_final must be positive");
  if (n_t < 1) throw std::invalid_argument("n_t must be at least 1");
  dt_ = t_final / static_cast<double>(n_t);
}

OccupationTensor::OccupationTensor(const PhaseGrid& grid)
    : grid_(grid), counts_(grid.cell_count(), 0.0), escaped_(grid.n_x(), 0.0) {}

double OccupationTensor::column_sum(std::size_t i) const {
  const std::size_t per_column = grid_.n_v() * grid_.n_v();
  const auto begin = counts_.begin() + static_cast<std::ptrdiff_t>(i * per_column);
  return std::accumulate(begin, begin + static_cast<std::ptrdiff_t>(per_column), 0.0);
}

double OccupationTensor::total() const { return std::accumulate(counts_.begin(), counts_.end(), 0.0); }

double OccupationTensor::escaped_total() const {
  return std::accumulate(escaped_.begin(), escaped_.end(), 0.0);
}

double wrap_position(double x, double p_max) {
  if (x >= 0.0 && x < p_max) return x;
  double r = std::fmod(x, p_max);
  if (r < 0.0) r += p_max;
  // fmod of a tiny negative value plus p_max can round up to p_max itself.
  if (r >= p_max) r = 0.0;
  return r;
}

namespace {

std::size_t clamp_cell(double s, std::size_t n) {
  if (s <= 0.0) return 0;
  const auto c = static_cast<std::size_t>(s);
  return c >= n ? n - 1 : c;
}

}  // namespace

std::size_t spatial_cell(double x, const PhaseGrid& grid) {
  return clamp_cell(std::floor(x / grid.dx()), grid.n_x());
}

std::optional<CellIndex> cell_index(const Particle& p, const PhaseGrid& grid) {
  const double v_max = grid.v_max();
  if (!(std::abs(p.v1) < v_max) || !(std::abs(p.v2) < v_max)) return std::nullopt;
  CellIndex c;
  c.i = spatial_cell(p.x, grid);
  c.l = clamp_cell(std::floor((p.v1 + v_max) / grid.dv()), grid.n_v());
  c.m = clamp_cell(std::floor((p.v2 + v_max) / grid.dv()), grid.n_v());
  return c;
}

}  // namespace vlasov
