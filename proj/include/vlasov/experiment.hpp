#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vlasov/analysis.hpp"
#include "vlasov/config.hpp"
#include "vlasov/io.hpp"

namespace vlasov {

/// Environment variable that replaces output.dir when set and non-empty.
inline constexpr const char* kOutputDirEnv = "VLASOV_CTRL_OUTPUT_DIR";

std::filesystem::path resolve_output_dir(const ExperimentConfig& config);

struct ChargeAudit {
  /// max_k |sum rho dx| / sum |rho| dx (0 when the plasma is locally neutral everywhere).
  double max_relative_net_charge = 0.0;
  bool counts_constant = true;
};
ChargeAudit audit_charge(const DiagnosticsSeries& d);

struct SimulationOutcome {
  DiagnosticsSeries diagnostics;
  ChargeAudit charge;
  std::optional<DampingFit> damping;
  std::string damping_error;
  GrowthSummary growth;
  /// Electron sign(v1) correlation with t = 0 and (x, v1)-cell correlation ratio, per step.
  std::vector<double> sign_correlation;
  std::vector<double> cell_correlation;
  PerSpecies<SpeciesParticles> final;
};

/// Forward run at B = 0 with the configured analysis.
SimulationOutcome simulate(const ExperimentConfig& config, const std::optional<ControlField>& control = {},
                           ForwardTrajectory* trajectory = nullptr);

struct OptimizationOutcome {
  OptimizationReport report;
  DiagnosticsSeries uncontrolled;
  DiagnosticsSeries controlled;
  ControlField control;
  /// Accepted iterations with strictly smaller cost than the previous one.
  std::size_t strict_decreases = 0;
};

OptimizationOutcome optimize(const ExperimentConfig& config, const IterationCallback& callback = {});

struct DirectionCheck {
  double adjoint = 0.0;
  double finite_difference = 0.0;
  double relative_error = 0.0;
  double cost_plus = 0.0;
  double cost_minus = 0.0;
  /// Same comparison without the penalty: (G, H)_L2 vs. differences of tracking + terminal.
  double tracking_adjoint = 0.0;
  double tracking_finite_difference = 0.0;
  double tracking_relative_error = 0.0;
};

struct GradcheckResult {
  double base_cost = 0.0;
  std::vector<DirectionCheck> directions;
  double max_relative_error = 0.0;
  double max_tracking_relative_error = 0.0;
  bool passed = false;
};

/// Smooth random direction: sum of cos(a pi t / T) cos(b pi x / p_max) modes
/// with Gaussian coefficients, scaled to unit maximum.
Lattice random_direction(const TimeGrid& time, const PhaseGrid& grid, std::size_t modes, RandomStream& rng);

/// Compares (grad_V, H)_V with central differences of the frozen-noise reduced
/// cost at B = base_control for the configured number of random directions.
GradcheckResult gradcheck(const ExperimentConfig& config);

/// Writes the run outputs and summary.toml; returns the summary.
Summary run_experiment(const ExperimentConfig& config);
Summary run_gradcheck(const ExperimentConfig& config, bool& passed);

}  // namespace vlasov
