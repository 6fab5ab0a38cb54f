#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vlasov/adjoint.hpp"
#include "vlasov/forward.hpp"
#include "vlasov/gradient.hpp"
#include "vlasov/optimizer.hpp"

namespace vlasov {

inline constexpr const char* kDiagnosticsHeader =
    "k,t,electric_energy,mean_x_e,var_x_e,maxdev_e,mean_x_i,var_x_i,maxdev_i";
inline constexpr const char* kAdjointHeader = "k,t,N_lambda_e,N_lambda_i,created,clamped";
inline constexpr const char* kGradientHeader = "k,i,t,x,G,grad_L2,grad_V";
inline constexpr const char* kFieldHeader = "k,t,x,E";
inline constexpr const char* kPhaseHeader = "x,v1,v2,species";
inline constexpr const char* kControlHeader = "k,i,t,x,B";
inline constexpr const char* kOptimizationHeader =
    "iteration,cost,grad_norm_V,sigma,beta,evaluations,clamped,restarted,step_norm,max_dt_B,max_dx_B";

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

void write_diagnostics_csv(const std::filesystem::path& path, const DiagnosticsSeries& d);
void write_fields_csv(const std::filesystem::path& path, const ForwardTrajectory& traj);
void write_phase_csv(const std::filesystem::path& path, const PerSpecies<SpeciesParticles>& species);
void write_gradient_csv(const std::filesystem::path& path, const GradientField& g, const TimeGrid& time,
                        const PhaseGrid& grid);
void write_adjoint_csv(const std::filesystem::path& path, const AdjointTrajectory& adj, const TimeGrid& time);
void write_control_csv(const std::filesystem::path& path, const ControlField& control);
void write_optimization_csv(const std::filesystem::path& path, const OptimizationReport& report);
/// One "key=value" line per field and iteration.
void write_optimization_log(const std::filesystem::path& path, const OptimizationReport& report);

/// Small sectioned key-value summary, written as TOML.
class Summary {
 public:
  using Value = std::variant<double, std::int64_t, bool, std::string>;

  void set(const std::string& section, const std::string& key, Value value);
  const std::vector<std::pair<std::string, std::vector<std::pair<std::string, Value>>>>& sections() const {
    return sections_;
  }
  std::string to_toml() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, Value>>>> sections_;
};

}  // namespace vlasov
