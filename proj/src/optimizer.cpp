#include "vlasov/optimizer.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

#include "vlasov/errors.hpp"

namespace vlasov {

void NcgConfig::validate() const {
  if (!(tol > 0.0)) throw ConfigInvalid("ncg.tol must be > 0");
  if (l_max < 1) throw ConfigInvalid("ncg.l_max must be >= 1");
  if (!(armijo_c1 > 0.0 && armijo_c1 < 1.0)) throw ConfigInvalid("ncg.armijo_c1 must lie in (0, 1)");
  if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0)) {
    throw ConfigInvalid("ncg.armijo_shrink must lie in (0, 1)");
  }
  if (!(sigma_init > 0.0)) throw ConfigInvalid("ncg.sigma_init must be > 0");
  if (!(initial_step >= 0.0)) throw ConfigInvalid("ncg.initial_step must be >= 0");
  if (max_backtracks < 1) throw ConfigInvalid("ncg.max_backtracks must be >= 1");
}

Objective make_objective(const ReducedCost& reduced) {
  Objective obj;
  const TimeGrid& time = reduced.problem().forward.time;
  const PhaseGrid& grid = reduced.problem().forward.grid;
  obj.value = [&reduced, time, grid](const Lattice& b) {
    return reduced.evaluate(ControlField(time, grid, b)).cost.total();
  };
  obj.gradient = [&reduced, time, grid](const Lattice& b) {
    GradientEvaluation g = reduced.gradient(ControlField(time, grid, b));
    return ObjectiveGradient{g.cost.total(), std::move(g.gradient.grad_V), g.clamped_cells};
  };
  obj.inner = [&reduced](const Lattice& u, const Lattice& w) { return reduced.inner_V(u, w); };
  obj.dt = time.dt();
  obj.dx = grid.dx();
  return obj;
}

namespace {

void audit_derivatives(IterationRecord& rec, const Lattice& b, double dt, double dx) {
  rec.max_dt_B = 0.0;
  rec.max_dx_B = 0.0;
  for (std::size_t k = 0; k < b.n_times; ++k) {
    for (std::size_t i = 0; i < b.n_x; ++i) {
      if (k + 1 < b.n_times) rec.max_dt_B = std::max(rec.max_dt_B, std::abs(b(k + 1, i) - b(k, i)) / dt);
      if (i + 1 < b.n_x) rec.max_dx_B = std::max(rec.max_dx_B, std::abs(b(k, i + 1) - b(k, i)) / dx);
    }
  }
}

}  // namespace

OptimizationReport ncg_minimize(const Lattice& B0, const Objective& objective, const NcgConfig& cfg,
                                const IterationCallback& callback) {
  cfg.validate();
  const std::size_t restart_every = cfg.restart_every > 0 ? cfg.restart_every : B0.data.size();

  OptimizationReport report;
  Lattice b = B0;
  ObjectiveGradient current = objective.gradient(b);
  double gg = objective.inner(current.grad, current.grad);

  IterationRecord start;
  start.cost = current.value;
  start.grad_norm_V = std::sqrt(std::max(gg, 0.0));
  start.evaluations = 1;
  start.clamped = current.clamped;
  audit_derivatives(start, b, objective.dt, objective.dx);
  report.iterations.push_back(start);
  if (callback) callback(start, b);

  report.final_control = b;
  report.final_cost = current.value;
  if (gg == 0.0) {
    report.converged = true;
    report.stop_reason = "zero gradient";
    return report;
  }

  Lattice h = -1.0 * current.grad;
  auto fresh_step = [&cfg](const Lattice& dir) {
    const double m = dir.max_abs();
    return cfg.initial_step > 0.0 && m > 0.0 ? cfg.initial_step / m : cfg.sigma_init;
  };
  double sigma = fresh_step(h);
  bool restarted = true;
  for (std::size_t iter = 1; iter <= cfg.l_max; ++iter) {
    double slope = objective.inner(current.grad, h);
    if (!(slope < 0.0)) {
      h = -1.0 * current.grad;
      slope = -gg;
      restarted = true;
    }

    std::size_t evaluations = 0;
    double step = sigma;
    bool accepted = false;
    bool immediate = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      step = attempt == 0 ? sigma : fresh_step(h);
      for (std::size_t bt = 0; bt <= cfg.max_backtracks; ++bt) {
        const double trial = objective.value(b + step * h);
        ++evaluations;
        if (trial <= current.value + cfg.armijo_c1 * step * slope) {
          accepted = true;
          immediate = bt == 0;
          break;
        }
        step *= cfg.armijo_shrink;
      }
      if (!accepted) {
        spdlog::warn("line search failed at iteration {} after {} evaluations", iter, evaluations);
        if (attempt == 0) {
          h = -1.0 * current.grad;
          slope = -gg;
          restarted = true;
        }
      }
    }
    if (!accepted) {
      report.line_search_failed = true;
      report.stop_reason = "line search failed";
      break;
    }

    const Lattice delta = step * h;
    b += delta;
    ObjectiveGradient next = objective.gradient(b);
    ++evaluations;
    if (next.value > current.value) {
      spdlog::warn("cost increased after an accepted step ({} -> {}); noise is not frozen", current.value,
                   next.value);
    }
    const double gg_next = objective.inner(next.grad, next.grad);
    double beta = gg_next / gg;
    bool restart_next = iter % restart_every == 0;

    IterationRecord rec;
    rec.iteration = iter;
    rec.cost = next.value;
    rec.grad_norm_V = std::sqrt(std::max(gg_next, 0.0));
    rec.sigma = step;
    rec.beta = restart_next ? 0.0 : beta;
    rec.evaluations = evaluations;
    rec.clamped = next.clamped;
    rec.restarted = restarted;
    rec.step_norm = delta.norm2();
    audit_derivatives(rec, b, objective.dt, objective.dx);
    report.iterations.push_back(rec);
    if (callback) callback(rec, b);

    current = std::move(next);
    gg = gg_next;
    report.final_control = b;
    report.final_cost = current.value;

    if (rec.step_norm <= cfg.tol) {
      report.converged = true;
      report.stop_reason = "step below tolerance";
      break;
    }
    if (gg == 0.0) {
      report.converged = true;
      report.stop_reason = "zero gradient";
      break;
    }
    if (restart_next) {
      h = -1.0 * current.grad;
    } else {
      h *= beta;
      h.add_scaled(current.grad, -1.0);
    }
    restarted = restart_next;
    sigma = immediate ? 2.0 * step : step;
  }
  if (report.stop_reason.empty()) report.stop_reason = "iteration limit";
  return report;
}

}  // namespace vlasov
