#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vlasov/domain.hpp"

namespace vlasov {

/// Values on the (n_t + 1) x n_x space-time lattice (t_k, x_i), row-major in k.
struct Lattice {
  std::size_t n_times = 0;
  std::size_t n_x = 0;
  std::vector<double> data;

  Lattice() = default;
  Lattice(std::size_t times, std::size_t nx, double value = 0.0)
      : n_times(times), n_x(nx), data(times * nx, value) {}

  double& operator()(std::size_t k, std::size_t i) { return data[k * n_x + i]; }
  double operator()(std::size_t k, std::size_t i) const { return data[k * n_x + i]; }
  std::span<const double> row(std::size_t k) const { return {data.data() + k * n_x, n_x}; }

  bool same_shape(const Lattice& o) const { return n_times == o.n_times && n_x == o.n_x; }
  bool operator==(const Lattice&) const = default;

  Lattice& operator+=(const Lattice& o);
  Lattice& operator*=(double s);
  /// this += s * o
  Lattice& add_scaled(const Lattice& o, double s);
  /// Euclidean norm of the raw values.
  double norm2() const;
  double max_abs() const;
};

Lattice operator+(Lattice a, const Lattice& b);
Lattice operator-(Lattice a, const Lattice& b);
Lattice operator*(double s, Lattice a);

/// Scalar magnetic control B(t, x) sampled at (t_k, x_i). Inside a timestep
/// the pusher uses the mid-step value (B^k + B^{k+1}) / 2 interpolated
/// linearly between cell centres with periodic closure.
struct ControlField {
  TimeGrid time;
  PhaseGrid grid;
  Lattice values;

  ControlField(const TimeGrid& t, const PhaseGrid& g, double value = 0.0)
      : time(t), grid(g), values(t.n_t() + 1, g.n_x(), value) {}
  ControlField(const TimeGrid& t, const PhaseGrid& g, Lattice v);

  /// Mid-step cell-centre values used for the step t_k -> t_{k+1}.
  std::vector<double> step_values(std::size_t k) const;
  /// Bilinear interpolation in (t, x), periodic in x.
  double evaluate(double t, double x) const;
};

}  // namespace vlasov
