#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vlasov/control.hpp"
#include "vlasov/gradient.hpp"

namespace vlasov {

struct NcgConfig {
  /// Stop when |B^{l+1} - B^l|_2 <= tol.
  double tol = 1e-6;
  std::size_t l_max = 20;
  double armijo_c1 = 1e-4;
  double armijo_shrink = 0.5;
  double sigma_init = 1.0;
  /// If > 0, trial steps that start from sigma_init are rescaled so that
  /// max|sigma h| equals this value (in units of B). 0 keeps the raw sigma.
  double initial_step = 0.0;
  /// Steepest-descent restart period; 0 means (n_t + 1) * n_x.
  std::size_t restart_every = 0;
  std::size_t max_backtracks = 30;

  void validate() const;
  bool operator==(const NcgConfig&) const = default;
};

struct ObjectiveGradient {
  double value = 0.0;
  /// Gradient in the inner product of the objective.
  Lattice grad;
  std::size_t clamped = 0;
};

/// Minimal interface the optimiser needs; lets tests plug in closed-form surrogates.
struct Objective {
  std::function<double(const Lattice&)> value;
  std::function<ObjectiveGradient(const Lattice&)> gradient;
  std::function<double(const Lattice&, const Lattice&)> inner;
  /// Lattice spacings, only used for the |d_t B|, |d_x B| audit columns.
  double dt = 1.0;
  double dx = 1.0;
};

/// Reduced cost in the V inner product.
Objective make_objective(const ReducedCost& reduced);

struct IterationRecord {
  std::size_t iteration = 0;
  double cost = 0.0;
  double grad_norm_V = 0.0;
  double sigma = 0.0;
  double beta = 0.0;
  std::size_t evaluations = 0;
  std::size_t clamped = 0;
  bool restarted = false;
  double step_norm = 0.0;
  double max_dt_B = 0.0;
  double max_dx_B = 0.0;
};

struct OptimizationReport {
  /// Entry 0 is the starting point; entry l > 0 follows the l-th accepted step.
  std::vector<IterationRecord> iterations;
  Lattice final_control;
  double final_cost = 0.0;
  bool converged = false;
  bool line_search_failed = false;
  std::string stop_reason;

  std::size_t accepted_steps() const { return iterations.empty() ? 0 : iterations.size() - 1; }
};

using IterationCallback = std::function<void(const IterationRecord&, const Lattice&)>;

/// Nonlinear conjugate gradients with Fletcher-Reeves beta and Armijo
/// backtracking. A failed line search is retried once along the steepest
/// descent direction before the run stops with a partial report.
OptimizationReport ncg_minimize(const Lattice& B0, const Objective& objective, const NcgConfig& cfg,
                                const IterationCallback& callback = {});

}  // namespace vlasov
