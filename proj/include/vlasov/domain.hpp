#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace vlasov {

enum class Species : std::size_t { electrons = 0, ions = 1 };
inline constexpr std::size_t kNumSpecies = 2;

inline constexpr std::size_t to_index(Species s) { return static_cast<std::size_t>(s); }
const char* name(Species s);

/// Dimensionless transport (mu_x) and force (mu_v) factors of one species.
/// Electrons are fixed at mu_x = 1, mu_v = -1; ions carry small positive
/// factors, typically of order 1e-2.
struct SpeciesParams {
  double mu_x = 1.0;
  double mu_v = -1.0;
  int sign = -1;

  static SpeciesParams electrons() { return {1.0, -1.0, -1}; }
  static SpeciesParams ions(double mu_x = 1e-2, double mu_v = 1e-2) { return {mu_x, mu_v, +1}; }

  void validate() const;
  bool operator==(const SpeciesParams&) const = default;
};

/// Cell-centred phase-space mesh on [0, p_max) x [-v_max, v_max)^2.
/// Indices are 0-based: x_i = (i + 1/2) dx, v_l = (l + 1/2) dv - v_max.
class PhaseGrid {
 public:
  PhaseGrid(double p_max, double v_max, std::size_t n_x, std::size_t n_v);

  double p_max() const { return p_max_; }
  double v_max() const { return v_max_; }
  std::size_t n_x() const { return n_x_; }
  std::size_t n_v() const { return n_v_; }
  double dx() const { return dx_; }
  double dv() const { return dv_; }
  double cell_volume() const { return dx_ * dv_ * dv_; }
  std::size_t cell_count() const { return n_x_ * n_v_ * n_v_; }

  double x_center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dx_; }
  double v_center(std::size_t l) const { return (static_cast<double>(l) + 0.5) * dv_ - v_max_; }

  bool operator==(const PhaseGrid&) const = default;

 private:
  double p_max_;
  double v_max_;
  std::size_t n_x_;
  std::size_t n_v_;
  double dx_;
  double dv_;
};

/// Uniform partition t_k = k dt of [0, t_final], k = 0..n_t.
class TimeGrid {
 public:
  TimeGrid(double t_final, std::size_t n_t);

  double t_final() const { return t_final_; }
  std::size_t n_t() const { return n_t_; }
  double dt() const { return dt_; }
  double t(std::size_t k) const { return static_cast<double>(k) * dt_; }

  bool operator==(const TimeGrid&) const = default;

 private:
  double t_final_;
  std::size_t n_t_;
  double dt_;
};

struct Particle {
  double x = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;

  bool operator==(const Particle&) const = default;
};

/// Particle list of one species. `weight` is the mass carried by every
/// numerical particle, so weight * count / cell_volume is a phase-space density.
struct SpeciesParticles {
  SpeciesParams species;
  std::vector<Particle> particles;
  double weight = 0.0;

  std::size_t size() const { return particles.size(); }
};

struct CellIndex {
  std::size_t i = 0;
  std::size_t l = 0;
  std::size_t m = 0;

  bool operator==(const CellIndex&) const = default;
};

/// Per-cell particle counts. Particles whose velocity leaves the mesh are not
/// part of `counts` but are tallied per spatial cell in `escaped`, so charge
/// bookkeeping stays exact.
class OccupationTensor {
 public:
  explicit OccupationTensor(const PhaseGrid& grid);

  const PhaseGrid& grid() const { return grid_; }

  double operator()(std::size_t i, std::size_t l, std::size_t m) const {
    return counts_[offset(i, l, m)];
  }
  double& operator()(std::size_t i, std::size_t l, std::size_t m) { return counts_[offset(i, l, m)]; }

  const std::vector<double>& counts() const { return counts_; }
  std::vector<double>& counts() { return counts_; }
  const std::vector<double>& escaped() const { return escaped_; }
  std::vector<double>& escaped() { return escaped_; }

  /// Sum over the velocity cells of spatial column i (in-domain particles only).
  double column_sum(std::size_t i) const;
  double total() const;
  double escaped_total() const;

  std::size_t offset(std::size_t i, std::size_t l, std::size_t m) const {
    return (i * grid_.n_v() + l) * grid_.n_v() + m;
  }

 private:
  PhaseGrid grid_;
  std::vector<double> counts_;
  std::vector<double> escaped_;
};

/// Periodic reduction into [0, p_max).
double wrap_position(double x, double p_max);

/// Spatial cell of a wrapped position; cell boundaries belong to the higher cell.
std::size_t spatial_cell(double x, const PhaseGrid& grid);

/// Phase-space cell of a particle, or nullopt when |v1| >= v_max or |v2| >= v_max.
std::optional<CellIndex> cell_index(const Particle& p, const PhaseGrid& grid);

}  // namespace vlasov
