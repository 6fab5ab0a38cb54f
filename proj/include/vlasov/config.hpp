#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "vlasov/adjoint.hpp"
#include "vlasov/forward.hpp"
#include "vlasov/gradient.hpp"
#include "vlasov/optimizer.hpp"
#include "vlasov/tracking.hpp"

namespace vlasov {

/// Initial density of one species, in plain parameters.
struct InitialConfig {
  /// landau | maxwellian | two_stream | bump
  std::string kind = "maxwellian";
  double alpha = 0.0;        // landau perturbation amplitude
  double wave_number = 0.5;  // landau
  double sigma = 1.0;        // maxwellian thermal spread
  double v_beam = 3.0;       // two_stream
  double sigma_beam = 0.5;   // two_stream
  double sigma_v2 = 0.05;    // two_stream
  double width_x = 1.0;      // bump half-width in x, centred at p_max / 2
  double width_v = 1.0;      // bump half-width in v

  bool operator==(const InitialConfig&) const = default;
};

struct SpeciesConfig {
  double mu_x = 1.0;
  double mu_v = -1.0;
  std::size_t n_particles = 10000;
  /// 0 means p_max (the mass of a unit-density uniform plasma).
  double total_mass = 0.0;
  bool frozen = false;
  InitialConfig initial;
  TrackingWeights tracking;

  bool operator==(const SpeciesConfig&) const = default;
};

struct GradcheckConfig {
  std::size_t directions = 3;
  double epsilon = 1e-3;
  double tolerance = 0.1;
  /// Constant value of the base control at which derivatives are compared.
  double base_control = 1.0;
  /// Number of low-order cosine modes per axis in the random directions.
  std::size_t modes = 3;

  bool operator==(const GradcheckConfig&) const = default;
};

struct OutputConfig {
  std::string dir = "out";
  bool diagnostics = true;
  bool fields = false;
  bool phase = false;
  bool gradient = false;
  bool adjoint = false;

  bool operator==(const OutputConfig&) const = default;
};

struct ExperimentConfig {
  /// landau | two_stream | confinement | custom
  std::string preset = "custom";
  /// simulate | optimize
  std::string mode = "simulate";
  std::uint64_t seed = 1;
  std::size_t threads = 1;

  double p_max = 4.0 * 3.14159265358979323846;
  double v_max = 10.0;
  std::size_t n_x = 64;
  std::size_t n_v = 64;
  double t_final = 20.0;
  std::size_t n_t = 400;
  double neutrality_tol = 1e-10;
  double max_escape_fraction = 0.01;

  PerSpecies<SpeciesConfig> species;  // indexed by Species

  PenaltyConfig penalty;
  AdjointOptions adjoint;
  GradientOptions gradient;
  NcgConfig ncg;
  double fit_t0 = 0.0;
  double fit_t1 = 10.0;
  /// Fit only the initially decreasing part of the peak envelope.
  bool fit_envelope_only = true;
  GradcheckConfig gradcheck;
  OutputConfig output;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Defaults of a named preset; throws ConfigInvalid for unknown names.
ExperimentConfig preset_config(const std::string& name);

/// Parses TOML text. `[experiment] preset` is required and supplies the
/// defaults; for the custom preset the grid, time and species initial data
/// are required as well. Unknown keys are rejected. The result is validated.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Writes every field; parse_config(to_toml(c)) == c.
std::string to_toml(const ExperimentConfig& config);

/// Throws ConfigInvalid with the offending key.
void validate(const ExperimentConfig& config);

DensitySpec make_density(const InitialConfig& initial, double p_max);
ForwardSetup make_forward_setup(const ExperimentConfig& config);
ControlProblem make_problem(const ExperimentConfig& config);

}  // namespace vlasov
