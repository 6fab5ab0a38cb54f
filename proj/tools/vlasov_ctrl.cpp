#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "vlasov/errors.hpp"
#include "vlasov/experiment.hpp"

namespace {

enum Exit : int { kOk = 0, kConfigError = 2, kSolverError = 3, kCheckFailed = 4 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Particle-in-cell Vlasov-Poisson solver with adjoint-based magnetic control"};
  app.require_subcommand(1);
  std::string config_path;
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "TOML config file")->required();
  auto* validate = app.add_subcommand("validate", "Check a config file and print the resolved settings");
  validate->add_option("config", config_path, "TOML config file")->required();
  auto* gradcheck = app.add_subcommand("gradcheck", "Compare adjoint and finite-difference directional derivatives");
  gradcheck->add_option("config", config_path, "TOML config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));

  vlasov::ExperimentConfig config;
  try {
    config = vlasov::load_config(config_path);
  } catch (const vlasov::ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (*validate) {
      std::cout << vlasov::to_toml(config);
      return kOk;
    }
    if (*run) {
      const vlasov::Summary s = vlasov::run_experiment(config);
      std::cout << s.to_toml();
      return kOk;
    }
    bool passed = false;
    const vlasov::Summary s = vlasov::run_gradcheck(config, passed);
    std::cout << s.to_toml();
    return passed ? kOk : kCheckFailed;
  } catch (const vlasov::ConfigInvalid& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolverError;
  }
}
