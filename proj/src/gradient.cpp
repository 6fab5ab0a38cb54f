#include "vlasov/gradient.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "vlasov/errors.hpp"

namespace vlasov {

void PenaltyConfig::validate() const {
  if (!(alpha > 0.0)) throw ConfigInvalid("penalty.alpha must be > 0");
  if (!(kappa_t > 0.0)) throw ConfigInvalid("penalty.kappa_t must be > 0");
  if (!(kappa_x > 0.0)) throw ConfigInvalid("penalty.kappa_x must be > 0");
}

double time_weight(std::size_t k, std::size_t n_t) { return (k == 0 || k == n_t) ? 0.5 : 1.0; }

namespace {

void check_shape(const Lattice& u, const TimeGrid& time, const PhaseGrid& grid) {
  if (u.n_times != time.n_t() + 1 || u.n_x != grid.n_x()) {
    throw GridMismatch("lattice shape does not match the time and space grids");
  }
}

}  // namespace

double inner_L2(const Lattice& u, const Lattice& w, const TimeGrid& time, const PhaseGrid& grid) {
  check_shape(u, time, grid);
  check_shape(w, time, grid);
  double total = 0.0;
  for (std::size_t k = 0; k < u.n_times; ++k) {
    double row = 0.0;
    for (std::size_t i = 0; i < u.n_x; ++i) row += u(k, i) * w(k, i);
    total += time_weight(k, time.n_t()) * row;
  }
  return total * time.dt() * grid.dx();
}

double inner_V(const Lattice& u, const Lattice& w, const TimeGrid& time, const PhaseGrid& grid,
               const PenaltyConfig& penalty) {
  double total = inner_L2(u, w, time, grid);
  const double dt = time.dt();
  const double dx = grid.dx();
  double dtt = 0.0;
  for (std::size_t k = 0; k + 1 < u.n_times; ++k) {
    for (std::size_t i = 0; i < u.n_x; ++i) {
      dtt += (u(k + 1, i) - u(k, i)) * (w(k + 1, i) - w(k, i));
    }
  }
  total += penalty.kappa_t * dtt * dx / dt;
  double dxx = 0.0;
  for (std::size_t k = 0; k < u.n_times; ++k) {
    double row = 0.0;
    for (std::size_t i = 0; i + 1 < u.n_x; ++i) {
      row += (u(k, i + 1) - u(k, i)) * (w(k, i + 1) - w(k, i));
    }
    dxx += time_weight(k, time.n_t()) * row;
  }
  total += penalty.kappa_x * dxx * dt / dx;
  return total;
}

Lattice apply_elliptic(const Lattice& u, const TimeGrid& time, const PhaseGrid& grid,
                       double kappa_t, double kappa_x) {
  check_shape(u, time, grid);
  const std::size_t nk = u.n_times;
  const std::size_t nx = u.n_x;
  const double ct = kappa_t / (time.dt() * time.dt());
  const double cx = kappa_x / (grid.dx() * grid.dx());
  Lattice out(nk, nx);
  for (std::size_t k = 0; k < nk; ++k) {
    const std::size_t km = k == 0 ? 1 : k - 1;
    const std::size_t kp = k + 1 == nk ? nk - 2 : k + 1;
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t im = i == 0 ? 0 : i - 1;
      const std::size_t ip = i + 1 == nx ? nx - 1 : i + 1;
      const double d_tt = u(kp, i) - 2.0 * u(k, i) + u(km, i);
      const double d_xx = u(k, ip) - 2.0 * u(k, i) + u(k, im);
      out(k, i) = u(k, i) - ct * d_tt - cx * d_xx;
    }
  }
  return out;
}

Lattice assemble_G(const std::vector<PerSpecies<OccupationTensor>>& f,
                   const PerSpecies<double>& f_weights,
                   const std::vector<PerSpecies<OccupationTensor>>& lambda,
                   const PerSpecies<double>& lambda_weights,
                   const PerSpecies<SpeciesParams>& species, const TimeGrid& time,
                   const GradientOptions& options) {
  const std::size_t nk = time.n_t() + 1;
  if (f.size() != nk || lambda.size() != nk) {
    throw GridMismatch("assemble_G: need tensors for every time level");
  }
  const PhaseGrid& grid = f[0][0].grid();
  for (std::size_t k = 0; k < nk; ++k) {
    for (std::size_t s = 0; s < kNumSpecies; ++s) {
      if (!(f[k][s].grid() == grid) || !(lambda[k][s].grid() == grid)) {
        throw GridMismatch("assemble_G: tensors live on different grids");
      }
    }
  }
  const std::size_t nx = grid.n_x();
  const std::size_t nv = grid.n_v();
  const double dv = grid.dv();
  const double volume = grid.cell_volume();
  Lattice G(nk, nx);
  for (std::size_t k = 0; k < nk; ++k) {
    for (std::size_t s = 0; s < kNumSpecies; ++s) {
      const OccupationTensor& fs = f[k][s];
      const OccupationTensor& ls = lambda[k][s];
      const double mu = species[s].mu_x * species[s].mu_v;
      if (options.scaling == GradientScaling::continuum) {
        const double scale = mu * (f_weights[s] / volume) * (lambda_weights[s] / volume) * dv * dv;
        for (std::size_t i = 0; i < nx; ++i) {
          double sum = 0.0;
          for (std::size_t l = 0; l < nv; ++l) {
            for (std::size_t m = 0; m < nv; ++m) {
              const double lam = ls(i, l, m);
              if (lam == 0.0) continue;
              const double d1 = velocity_derivative(fs, i, l, m, 1, options.stencil);
              const double d2 = velocity_derivative(fs, i, l, m, 2, options.stencil);
              sum += lam * (grid.v_center(m) * d1 - grid.v_center(l) * d2);
            }
          }
          G(k, i) += scale * sum;
        }
      } else {
        // raw counts with 1-based indices; out-of-range neighbours count as empty
        const double scale = -mu * dv * dv * time.dt();
        for (std::size_t i = 0; i < nx; ++i) {
          double sum = 0.0;
          for (std::size_t l = 0; l < nv; ++l) {
            for (std::size_t m = 0; m < nv; ++m) {
              const double lam = ls(i, l, m);
              if (lam == 0.0) continue;
              const double li = static_cast<double>(l + 1);
              const double mi = static_cast<double>(m + 1);
              const double f_m1 = m + 1 < nv ? fs(i, l, m + 1) : 0.0;
              const double f_l1 = l + 1 < nv ? fs(i, l + 1, m) : 0.0;
              sum += (li * f_m1 - (li - mi) * fs(i, l, m) - mi * f_l1) * lam;
            }
          }
          G(k, i) += scale * sum;
        }
      }
    }
  }
  return G;
}

Lattice assemble_G_particles(const std::vector<PerSpecies<std::vector<Particle>>>& f_particles,
                             const PerSpecies<double>& f_weights,
                             const std::vector<PerSpecies<OccupationTensor>>& lambda,
                             const PerSpecies<double>& lambda_weights,
                             const PerSpecies<SpeciesParams>& species, const TimeGrid& time,
                             VelocityStencil stencil) {
  const std::size_t nk = time.n_t() + 1;
  if (f_particles.size() != nk || lambda.size() != nk) {
    throw GridMismatch("assemble_G_particles: need data for every time level");
  }
  const PhaseGrid& grid = lambda[0][0].grid();
  Lattice G(nk, grid.n_x());
  std::vector<double> column(grid.n_x());
  for (std::size_t k = 0; k < nk; ++k) {
    for (std::size_t s = 0; s < kNumSpecies; ++s) {
      if (!(lambda[k][s].grid() == grid)) throw GridMismatch("assemble_G_particles: grid mismatch");
      if (lambda[k][s].total() == 0.0) continue;
      const VelocityGradient g = velocity_gradient(lambda[k][s], lambda_weights[s], stencil);
      std::fill(column.begin(), column.end(), 0.0);
      for (const Particle& p : f_particles[k][s]) {
        if (!cell_index(p, grid)) continue;
        const std::size_t i = spatial_cell(p.x, grid);
        column[i] += p.v2 * interpolate_velocity(g.d1, grid, i, p.v1, p.v2) -
                     p.v1 * interpolate_velocity(g.d2, grid, i, p.v1, p.v2);
      }
      const double scale = -species[s].mu_x * species[s].mu_v * f_weights[s] / grid.dx();
      for (std::size_t i = 0; i < grid.n_x(); ++i) G(k, i) += scale * column[i];
    }
  }
  return G;
}

Lattice assemble_grad_L2(const Lattice& G, const ControlField& control, const PenaltyConfig& penalty) {
  if (!G.same_shape(control.values)) throw GridMismatch("assemble_grad_L2: shape mismatch");
  Lattice g = apply_elliptic(control.values, control.time, control.grid, penalty.kappa_t, penalty.kappa_x);
  g *= penalty.alpha;
  g += G;
  return g;
}

struct EllipticLift::Impl {
  Impl(const TimeGrid& t, const PhaseGrid& g) : time(t), grid(g) {}
  TimeGrid time;
  PhaseGrid grid;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
};

EllipticLift::EllipticLift(const TimeGrid& time, const PhaseGrid& grid, const PenaltyConfig& penalty)
    : impl_(std::make_unique<Impl>(time, grid)) {
  const std::size_t nk = time.n_t() + 1;
  const std::size_t nx = grid.n_x();
  const auto n = static_cast<Eigen::Index>(nk * nx);
  const double dt = time.dt();
  const double dx = grid.dx();
  auto idx = [nx](std::size_t k, std::size_t i) { return static_cast<Eigen::Index>(k * nx + i); };

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(n) * 9);
  auto couple = [&](Eigen::Index a, Eigen::Index b, double c) {
    entries.emplace_back(a, a, c);
    entries.emplace_back(b, b, c);
    entries.emplace_back(a, b, -c);
    entries.emplace_back(b, a, -c);
  };
  for (std::size_t k = 0; k < nk; ++k) {
    const double wk = time_weight(k, time.n_t());
    for (std::size_t i = 0; i < nx; ++i) {
      entries.emplace_back(idx(k, i), idx(k, i), wk * dt * dx);
      if (k + 1 < nk) couple(idx(k, i), idx(k + 1, i), penalty.kappa_t * dx / dt);
      if (i + 1 < nx) couple(idx(k, i), idx(k, i + 1), penalty.kappa_x * wk * dt / dx);
    }
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(entries.begin(), entries.end());
  impl_->solver.compute(m);
  if (impl_->solver.info() != Eigen::Success) {
    throw SolverBreakdown("elliptic lift: factorisation failed");
  }
}

EllipticLift::~EllipticLift() = default;
EllipticLift::EllipticLift(EllipticLift&&) noexcept = default;
EllipticLift& EllipticLift::operator=(EllipticLift&&) noexcept = default;

Lattice EllipticLift::solve(const Lattice& grad_L2) const {
  check_shape(grad_L2, impl_->time, impl_->grid);
  const std::size_t nk = grad_L2.n_times;
  const std::size_t nx = grad_L2.n_x;
  const double cell = impl_->time.dt() * impl_->grid.dx();
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(nk * nx));
  for (std::size_t k = 0; k < nk; ++k) {
    const double wk = time_weight(k, impl_->time.n_t()) * cell;
    for (std::size_t i = 0; i < nx; ++i) rhs[static_cast<Eigen::Index>(k * nx + i)] = wk * grad_L2(k, i);
  }
  const Eigen::VectorXd u = impl_->solver.solve(rhs);
  if (impl_->solver.info() != Eigen::Success || !u.allFinite()) {
    throw SolverBreakdown("elliptic lift: solve failed");
  }
  Lattice out(nk, nx);
  for (std::size_t j = 0; j < out.data.size(); ++j) out.data[j] = u[static_cast<Eigen::Index>(j)];
  return out;
}

Lattice lift_to_V(const Lattice& grad_L2, const TimeGrid& time, const PhaseGrid& grid,
                  const PenaltyConfig& penalty) {
  return EllipticLift(time, grid, penalty).solve(grad_L2);
}

CostAccumulator::CostAccumulator(const PerSpecies<TrackingWeights>& weights, const TimeGrid& time)
    : weights_(&weights), time_(time) {}

void CostAccumulator::operator()(const StepView& view) {
  const bool terminal = view.k == time_.n_t();
  double sum = 0.0;
  for (std::size_t s = 0; s < kNumSpecies; ++s) {
    const TrackingWeights& w = (*weights_)[s];
    const SpeciesParticles& list = view.species[s];
    if (terminal ? w.c_phi == 0.0 : w.c_theta == 0.0) continue;
    double species_sum = 0.0;
    for (const Particle& p : list.particles) species_sum += terminal ? w.phi(p) : w.theta(view.t, p);
    sum += list.weight * species_sum;
  }
  if (terminal) {
    terminal_ += sum;
  } else {
    tracking_ += time_.dt() * sum;
  }
}

CostBreakdown cost(const ForwardTrajectory& traj, const ControlField& control,
                   const PerSpecies<TrackingWeights>& weights, const PenaltyConfig& penalty) {
  const std::size_t n_t = traj.time.n_t();
  if (traj.particles.size() != n_t + 1) {
    throw std::invalid_argument("cost: trajectory must store particle snapshots");
  }
  CostAccumulator acc(weights, traj.time);
  const PerSpecies<OccupationTensor> no_tensors{OccupationTensor(traj.grid), OccupationTensor(traj.grid)};
  const SpatialField no_field;
  for (std::size_t k = 0; k <= n_t; ++k) {
    PerSpecies<SpeciesParticles> species;
    for (std::size_t s = 0; s < kNumSpecies; ++s) {
      species[s].species = traj.initial[s].species;
      species[s].weight = traj.weights[s];
      species[s].particles = traj.particles[k][s];
    }
    acc(StepView{k, traj.time.t(k), species, no_field, no_tensors});
  }
  CostBreakdown out;
  out.tracking = acc.tracking();
  out.terminal = acc.terminal();
  out.penalty = 0.5 * penalty.alpha * inner_V(control.values, control.values, control.time, control.grid, penalty);
  return out;
}

ReducedCost::ReducedCost(ControlProblem problem)
    : problem_(std::move(problem)),
      initial_(initial_particles(problem_.forward, problem_.seed)),
      lift_(problem_.forward.time, problem_.forward.grid, problem_.penalty) {
  problem_.penalty.validate();
  for (const auto& w : problem_.tracking) w.validate();
}

ControlField ReducedCost::zero_control() const {
  return ControlField(problem_.forward.time, problem_.forward.grid, 0.0);
}

double ReducedCost::inner_V(const Lattice& u, const Lattice& w) const {
  return vlasov::inner_V(u, w, problem_.forward.time, problem_.forward.grid, problem_.penalty);
}

CostEvaluation ReducedCost::evaluate(const ControlField& control, StoragePolicy storage) const {
  CostAccumulator acc(problem_.tracking, problem_.forward.time);
  StepObserver observer = [&acc](const StepView& v) { acc(v); };
  CostEvaluation out{{}, forward_solve(problem_.forward, initial_, control, storage, observer)};
  out.cost.tracking = acc.tracking();
  out.cost.terminal = acc.terminal();
  out.cost.penalty = 0.5 * problem_.penalty.alpha * inner_V(control.values, control.values);
  return out;
}

GradientEvaluation ReducedCost::gradient(const ControlField& control) const {
  const bool particle_form = problem_.gradient.estimator == DerivativeEstimator::particle &&
                             problem_.gradient.scaling == GradientScaling::continuum;
  const CostEvaluation fwd = evaluate(control, particle_form ? StoragePolicy::particles : StoragePolicy::tensors);
  GradientEvaluation out;
  out.cost = fwd.cost;
  AdjointOptions adjoint = problem_.adjoint;
  adjoint.estimator = particle_form ? DerivativeEstimator::particle : DerivativeEstimator::tensor;
  adjoint.stencil = problem_.gradient.stencil;
  const AdjointTrajectory adj =
      adjoint_solve(fwd.trajectory, problem_.forward, control, problem_.tracking, adjoint, problem_.seed);
  out.clamped_cells = adj.total_clamped_cells();
  PerSpecies<SpeciesParams> params;
  for (std::size_t s = 0; s < kNumSpecies; ++s) params[s] = problem_.forward.species[s].params;
  out.gradient.G = particle_form ? assemble_G_particles(fwd.trajectory.particles, fwd.trajectory.weights,
                                                       adj.tensors, adj.weights, params, problem_.forward.time,
                                                       problem_.gradient.stencil)
                                 : assemble_G(fwd.trajectory.tensors, fwd.trajectory.weights, adj.tensors,
                                              adj.weights, params, problem_.forward.time, problem_.gradient);
  out.gradient.grad_L2 = assemble_grad_L2(out.gradient.G, control, problem_.penalty);
  out.gradient.grad_V = lift_.solve(out.gradient.grad_L2);
  return out;
}

}  // namespace vlasov
