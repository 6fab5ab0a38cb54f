#include "vlasov/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vlasov/errors.hpp"
#include "vlasov/pusher.hpp"

namespace vlasov {

Lattice& Lattice::operator+=(const Lattice& o) { return add_scaled(o, 1.0); }

Lattice& Lattice::operator*=(double s) {
  for (double& v : data) v *= s;
  return *this;
}

Lattice& Lattice::add_scaled(const Lattice& o, double s) {
  if (!same_shape(o)) throw GridMismatch("lattice shapes differ");
  for (std::size_t j = 0; j < data.size(); ++j) data[j] += s * o.data[j];
  return *this;
}

double Lattice::norm2() const {
  double s = 0.0;
  for (double v : data) s += v * v;
  return std::sqrt(s);
}

double Lattice::max_abs() const {
  double m = 0.0;
  for (double v : data) m = std::max(m, std::abs(v));
  return m;
}

Lattice operator+(Lattice a, const Lattice& b) { return a.add_scaled(b, 1.0); }
Lattice operator-(Lattice a, const Lattice& b) { return a.add_scaled(b, -1.0); }
Lattice operator*(double s, Lattice a) { return a *= s; }

ControlField::ControlField(const TimeGrid& t, const PhaseGrid& g, Lattice v)
    : time(t), grid(g), values(std::move(v)) {
  if (values.n_times != t.n_t() + 1 || values.n_x != g.n_x()) {
    throw GridMismatch("control lattice must be (n_t + 1) x n_x");
  }
}

std::vector<double> ControlField::step_values(std::size_t k) const {
  std::vector<double> out(grid.n_x());
  for (std::size_t i = 0; i < grid.n_x(); ++i) out[i] = 0.5 * (values(k, i) + values(k + 1, i));
  return out;
}

double ControlField::evaluate(double t, double x) const {
  const double s = std::clamp(t / time.dt(), 0.0, static_cast<double>(time.n_t()));
  auto k0 = static_cast<std::size_t>(std::floor(s));
  if (k0 >= time.n_t()) k0 = time.n_t() - 1;
  const double w = s - static_cast<double>(k0);
  const double xw = wrap_position(x, grid.p_max());
  const double b0 = interpolate_periodic(values.row(k0), xw, grid);
  const double b1 = interpolate_periodic(values.row(k0 + 1), xw, grid);
  return (1.0 - w) * b0 + w * b1;
}

}  // namespace vlasov
