#include "vlasov/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include <spdlog/spdlog.h>

#include "vlasov/errors.hpp"

namespace vlasov {

std::filesystem::path resolve_output_dir(const ExperimentConfig& config) {
  const char* env = std::getenv(kOutputDirEnv);
  if (env != nullptr && *env != '\0') return std::filesystem::path(env);
  return std::filesystem::path(config.output.dir);
}

ChargeAudit audit_charge(const DiagnosticsSeries& d) {
  ChargeAudit a;
  for (std::size_t k = 0; k < d.net_charge.size(); ++k) {
    if (d.absolute_charge[k] > 0.0) {
      a.max_relative_net_charge = std::max(a.max_relative_net_charge, std::abs(d.net_charge[k]) / d.absolute_charge[k]);
    }
  }
  for (std::size_t s = 0; s < kNumSpecies; ++s) {
    for (std::size_t n : d.particle_count[s]) {
      if (n != d.particle_count[s].front()) a.counts_constant = false;
    }
  }
  return a;
}

SimulationOutcome simulate(const ExperimentConfig& config, const std::optional<ControlField>& control,
                           ForwardTrajectory* trajectory) {
  const ForwardSetup setup = make_forward_setup(config);
  const PerSpecies<SpeciesParticles> start = initial_particles(setup, config.seed);
  const ControlField b = control ? *control : ControlField(setup.time, setup.grid, 0.0);

  const std::size_t e = to_index(Species::electrons);
  SimulationOutcome out;
  StepObserver observer = [&](const StepView& v) {
    out.sign_correlation.push_back(beam_sign_correlation(start[e].particles, v.species[e].particles));
    out.cell_correlation.push_back(beam_mixing_correlation(start[e].particles, v.species[e].particles, setup.grid));
  };
  ForwardTrajectory traj = forward_solve(setup, start, b, StoragePolicy::none, observer);

  out.diagnostics = traj.diagnostics;
  out.charge = audit_charge(out.diagnostics);
  out.growth = growth_factor(out.diagnostics.t, out.diagnostics.electric_energy);
  try {
    out.damping = fit_damping_rate(out.diagnostics.t, out.diagnostics.electric_energy, config.fit_t0, config.fit_t1,
                                   config.fit_envelope_only);
  } catch (const InsufficientPeaks& err) {
    out.damping_error = err.what();
  }
  out.final = traj.final;
  if (trajectory != nullptr) *trajectory = std::move(traj);
  return out;
}

OptimizationOutcome optimize(const ExperimentConfig& config, const IterationCallback& callback) {
  const ReducedCost reduced(make_problem(config));
  const TimeGrid& time = reduced.problem().forward.time;
  const PhaseGrid& grid = reduced.problem().forward.grid;

  OptimizationOutcome out{{}, {}, {}, reduced.zero_control(), 0};
  out.uncontrolled = reduced.evaluate(reduced.zero_control()).trajectory.diagnostics;
  out.report = ncg_minimize(reduced.zero_control().values, make_objective(reduced), config.ncg, callback);
  out.control = ControlField(time, grid, out.report.final_control);
  out.controlled = reduced.evaluate(out.control).trajectory.diagnostics;
  for (std::size_t j = 1; j < out.report.iterations.size(); ++j) {
    if (out.report.iterations[j].cost < out.report.iterations[j - 1].cost) ++out.strict_decreases;
  }
  return out;
}

Lattice random_direction(const TimeGrid& time, const PhaseGrid& grid, std::size_t modes, RandomStream& rng) {
  Lattice h(time.n_t() + 1, grid.n_x());
  for (std::size_t a = 0; a < modes; ++a) {
    for (std::size_t b = 0; b < modes; ++b) {
      const double c = rng.normal() / static_cast<double>(1 + a + b);
      for (std::size_t k = 0; k < h.n_times; ++k) {
        const double ct = std::cos(static_cast<double>(a) * std::numbers::pi * time.t(k) / time.t_final());
        for (std::size_t i = 0; i < h.n_x; ++i) {
          const double cx = std::cos(static_cast<double>(b) * std::numbers::pi * grid.x_center(i) / grid.p_max());
          h(k, i) += c * ct * cx;
        }
      }
    }
  }
  const double m = h.max_abs();
  if (m > 0.0) h *= 1.0 / m;
  return h;
}

GradcheckResult gradcheck(const ExperimentConfig& config) {
  const ReducedCost reduced(make_problem(config));
  const TimeGrid& time = reduced.problem().forward.time;
  const PhaseGrid& grid = reduced.problem().forward.grid;
  const ControlField base(time, grid, config.gradcheck.base_control);
  const GradientEvaluation g = reduced.gradient(base);

  GradcheckResult result;
  result.base_cost = g.cost.total();
  auto rng = RandomStream::substream(config.seed, StreamPurpose::gradcheck_directions);
  const double eps = config.gradcheck.epsilon;
  result.passed = true;
  for (std::size_t d = 0; d < config.gradcheck.directions; ++d) {
    const Lattice h = random_direction(time, grid, config.gradcheck.modes, rng);
    DirectionCheck c;
    c.adjoint = reduced.inner_V(g.gradient.grad_V, h);
    const CostBreakdown plus = reduced.evaluate(ControlField(time, grid, base.values + eps * h)).cost;
    const CostBreakdown minus = reduced.evaluate(ControlField(time, grid, base.values - eps * h)).cost;
    c.cost_plus = plus.total();
    c.cost_minus = minus.total();
    c.finite_difference = (c.cost_plus - c.cost_minus) / (2.0 * eps);
    c.relative_error = std::abs(c.adjoint - c.finite_difference) / std::max(std::abs(c.finite_difference), 1e-300);
    c.tracking_adjoint = inner_L2(g.gradient.G, h, time, grid);
    c.tracking_finite_difference =
        ((plus.tracking + plus.terminal) - (minus.tracking + minus.terminal)) / (2.0 * eps);
    c.tracking_relative_error = std::abs(c.tracking_adjoint - c.tracking_finite_difference) /
                                std::max(std::abs(c.tracking_finite_difference), 1e-300);
    result.max_relative_error = std::max(result.max_relative_error, c.relative_error);
    result.max_tracking_relative_error = std::max(result.max_tracking_relative_error, c.tracking_relative_error);
    if (!(c.relative_error <= config.gradcheck.tolerance)) result.passed = false;
    result.directions.push_back(c);
  }
  return result;
}

namespace {

void summary_header(Summary& s, const ExperimentConfig& c, const std::filesystem::path& dir) {
  s.set("run", "preset", c.preset);
  s.set("run", "mode", c.mode);
  s.set("run", "seed", static_cast<std::int64_t>(c.seed));
  s.set("run", "output_dir", dir.string());
}

void summary_diagnostics(Summary& s, const std::string& section, const DiagnosticsSeries& d) {
  s.set(section, "final_electric_energy", d.electric_energy.back());
  s.set(section, "final_max_deviation_electrons", d.max_deviation[0].back());
  s.set(section, "final_max_deviation_ions", d.max_deviation[1].back());
  s.set(section, "final_var_x_electrons", d.var_x[0].back());
  s.set(section, "final_var_x_ions", d.var_x[1].back());
}

}  // namespace

Summary run_experiment(const ExperimentConfig& config) {
  const std::filesystem::path dir = resolve_output_dir(config);
  std::filesystem::create_directories(dir);
  Summary s;
  summary_header(s, config, dir);

  if (config.mode == "simulate") {
    ForwardTrajectory traj{TimeGrid(1.0, 1), PhaseGrid(1.0, 1.0, 2, 2), {}, {}, {}, {}, {}, {}, {}};
    const SimulationOutcome out = simulate(config, std::nullopt, config.output.fields ? &traj : nullptr);
    if (config.output.diagnostics) write_diagnostics_csv(dir / "diagnostics.csv", out.diagnostics);
    if (config.output.fields) write_fields_csv(dir / "fields.csv", traj);
    if (config.output.phase) write_phase_csv(dir / "phase_final.csv", out.final);
    s.set("charge", "max_relative_net_charge", out.charge.max_relative_net_charge);
    s.set("charge", "particle_counts_constant", out.charge.counts_constant);
    s.set("energy", "initial", out.diagnostics.electric_energy.front());
    s.set("energy", "growth_factor", out.growth.factor);
    s.set("energy", "t_max", out.growth.t_max);
    s.set("energy", "growth_factor_at_saturation", out.growth.factor_at_saturation);
    s.set("energy", "t_saturation", out.growth.t_saturation);
    s.set("mixing", "sign_correlation_at_max", out.sign_correlation[out.growth.k_max]);
    s.set("mixing", "sign_correlation_at_saturation", out.sign_correlation[out.growth.k_saturation]);
    s.set("mixing", "cell_correlation_at_max", out.cell_correlation[out.growth.k_max]);
    s.set("mixing", "cell_correlation_at_saturation", out.cell_correlation[out.growth.k_saturation]);
    if (out.damping) {
      s.set("damping", "rate", out.damping->rate);
      s.set("damping", "r_squared", out.damping->r_squared);
      s.set("damping", "peaks", static_cast<std::int64_t>(out.damping->peaks));
    } else {
      s.set("damping", "error", out.damping_error);
    }
    s.set("damping", "fit_t0", config.fit_t0);
    s.set("damping", "fit_t1", config.fit_t1);
    summary_diagnostics(s, "final", out.diagnostics);
  } else {
    const OptimizationOutcome out = optimize(config, [](const IterationRecord& r, const Lattice&) {
      spdlog::info("iteration {}: J = {:.6e}, |grad|_V = {:.3e}, sigma = {:.3e}", r.iteration, r.cost,
                   r.grad_norm_V, r.sigma);
    });
    write_optimization_csv(dir / "optimization.csv", out.report);
    write_optimization_log(dir / "optimization.log", out.report);
    write_control_csv(dir / "control.csv", out.control);
    if (config.output.diagnostics) {
      write_diagnostics_csv(dir / "diagnostics_uncontrolled.csv", out.uncontrolled);
      write_diagnostics_csv(dir / "diagnostics.csv", out.controlled);
    }
    if (config.output.gradient || config.output.adjoint) {
      const ReducedCost reduced(make_problem(config));
      const CostEvaluation fwd = reduced.evaluate(out.control, StoragePolicy::particles);
      if (config.output.adjoint) {
        const AdjointTrajectory adj = adjoint_solve(fwd.trajectory, reduced.problem().forward, out.control,
                                                    reduced.problem().tracking, reduced.problem().adjoint,
                                                    reduced.problem().seed);
        write_adjoint_csv(dir / "adjoint.csv", adj, reduced.problem().forward.time);
      }
      if (config.output.gradient) {
        const GradientEvaluation g = reduced.gradient(out.control);
        write_gradient_csv(dir / "gradient.csv", g.gradient, reduced.problem().forward.time,
                           reduced.problem().forward.grid);
      }
    }
    const OptimizationReport& r = out.report;
    s.set("optimization", "iterations", static_cast<std::int64_t>(r.accepted_steps()));
    s.set("optimization", "strict_decreases", static_cast<std::int64_t>(out.strict_decreases));
    s.set("optimization", "initial_cost", r.iterations.front().cost);
    s.set("optimization", "final_cost", r.final_cost);
    s.set("optimization", "converged", r.converged);
    s.set("optimization", "line_search_failed", r.line_search_failed);
    s.set("optimization", "stop_reason", r.stop_reason);
    std::int64_t clamped = 0;
    for (const auto& it : r.iterations) clamped += static_cast<std::int64_t>(it.clamped);
    s.set("optimization", "clamped_cells", clamped);
    summary_diagnostics(s, "uncontrolled", out.uncontrolled);
    summary_diagnostics(s, "controlled", out.controlled);
    s.set("charge", "max_relative_net_charge",
          std::max(audit_charge(out.uncontrolled).max_relative_net_charge,
                   audit_charge(out.controlled).max_relative_net_charge));
  }
  s.write(dir / "summary.toml");
  return s;
}

Summary run_gradcheck(const ExperimentConfig& config, bool& passed) {
  const std::filesystem::path dir = resolve_output_dir(config);
  std::filesystem::create_directories(dir);
  const GradcheckResult result = gradcheck(config);
  Summary s;
  summary_header(s, config, dir);
  s.set("gradcheck", "base_control", config.gradcheck.base_control);
  s.set("gradcheck", "epsilon", config.gradcheck.epsilon);
  s.set("gradcheck", "tolerance", config.gradcheck.tolerance);
  s.set("gradcheck", "base_cost", result.base_cost);
  for (std::size_t d = 0; d < result.directions.size(); ++d) {
    const DirectionCheck& c = result.directions[d];
    const std::string sec = "gradcheck.direction_" + std::to_string(d);
    s.set(sec, "adjoint", c.adjoint);
    s.set(sec, "finite_difference", c.finite_difference);
    s.set(sec, "relative_error", c.relative_error);
    s.set(sec, "tracking_adjoint", c.tracking_adjoint);
    s.set(sec, "tracking_finite_difference", c.tracking_finite_difference);
    s.set(sec, "tracking_relative_error", c.tracking_relative_error);
  }
  s.set("gradcheck", "max_relative_error", result.max_relative_error);
  s.set("gradcheck", "max_tracking_relative_error", result.max_tracking_relative_error);
  s.set("gradcheck", "passed", result.passed);
  s.write(dir / "summary.toml");
  passed = result.passed;
  return s;
}

}  // namespace vlasov
