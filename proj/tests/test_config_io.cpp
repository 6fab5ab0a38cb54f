#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <toml.hpp>

#include "vlasov/config.hpp"
#include "vlasov/errors.hpp"
#include "vlasov/experiment.hpp"
#include "vlasov/io.hpp"

using namespace vlasov;

namespace {

std::string first_line(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("presets round-trip through TOML") {
  for (const char* name : {"landau", "two_stream", "confinement"}) {
    const ExperimentConfig c = preset_config(name);
    CHECK_NOTHROW(validate(c));
    const ExperimentConfig back = parse_config(to_toml(c));
    CHECK(back == c);
  }
}

TEST_CASE("minimal files pick up preset defaults") {
  const auto c = parse_config("[experiment]\npreset = \"landau\"\n[grid]\nn_x = 32\n");
  CHECK(c.n_x == 32);
  CHECK(c.n_v == 64);
  CHECK(c.species[0].initial.alpha == 1.0);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("[grid]\nn_x = 4\n"), ConfigInvalid);
  CHECK_THROWS_AS(parse_config("[experiment]\npreset = \"nope\"\n"), ConfigInvalid);
  CHECK_THROWS_AS(parse_config("[experiment]\npreset = \"landau\"\n[grid]\nbogus = 1\n"), ConfigInvalid);
  CHECK_THROWS_AS(parse_config("[experiment]\npreset = \"landau\"\n[grid]\nn_x = \"many\"\n"), ConfigInvalid);
  CHECK_THROWS_AS(parse_config("[experiment]\npreset = \"landau\"\n[time]\nt_final = -1.0\n"), ConfigInvalid);
  CHECK_THROWS_AS(parse_config("[experiment]\npreset = \"landau\"\n[penalty]\nalpha = 0.0\n"), ConfigInvalid);
  CHECK_THROWS_AS(parse_config("[experiment]\npreset = \"custom\"\n"), ConfigInvalid);
  CHECK_THROWS_AS(parse_config("this is = = not toml"), ConfigInvalid);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    CHECK(std::stod(format_number(v)) == v);
  }
}

TEST_CASE("summary is valid TOML") {
  Summary s;
  s.set("run", "preset", std::string("landau"));
  s.set("run", "seed", std::int64_t{3});
  s.set("damping", "rate", 0.25);
  s.set("damping", "ok", true);
  s.set("damping", "rate", 0.5);  // overwrite
  const auto t = toml::parse(s.to_toml());
  CHECK(t["run"]["preset"].value<std::string>() == "landau");
  CHECK(t["run"]["seed"].value<std::int64_t>() == 3);
  CHECK(t["damping"]["rate"].value<double>() == 0.5);
  CHECK(t["damping"]["ok"].value<bool>() == true);
}

TEST_CASE("output directory override") {
  ExperimentConfig c = preset_config("landau");
  c.output.dir = "from_config";
  ::unsetenv(kOutputDirEnv);
  CHECK(resolve_output_dir(c) == std::filesystem::path("from_config"));
  ::setenv(kOutputDirEnv, "/tmp/elsewhere", 1);
  CHECK(resolve_output_dir(c) == std::filesystem::path("/tmp/elsewhere"));
  ::unsetenv(kOutputDirEnv);
}

TEST_CASE("CSV headers and byte-identical reruns") {
  ExperimentConfig c = preset_config("confinement");
  c.mode = "optimize";
  c.n_t = 4;
  c.ncg.l_max = 2;
  for (auto& s : c.species) s.n_particles = 2000;
  c.adjoint.n_terminal = 2000;
  c.output.fields = c.output.gradient = c.output.adjoint = c.output.phase = true;
  const auto base = std::filesystem::temp_directory_path() / "vlasov_io_test";
  std::filesystem::remove_all(base);
  c.output.dir = (base / "a").string();
  run_experiment(c);
  c.output.dir = (base / "b").string();
  c.threads = 3;
  run_experiment(c);
  const auto a = base / "a";
  CHECK(first_line(a / "diagnostics.csv") == kDiagnosticsHeader);
  CHECK(first_line(a / "optimization.csv") == kOptimizationHeader);
  CHECK(first_line(a / "control.csv") == kControlHeader);
  CHECK(first_line(a / "gradient.csv") == kGradientHeader);
  CHECK(first_line(a / "adjoint.csv") == kAdjointHeader);
  for (const char* f : {"diagnostics.csv", "diagnostics_uncontrolled.csv", "optimization.csv", "control.csv"}) {
    CHECK(slurp(a / f) == slurp(base / "b" / f));
  }
  const auto summary = toml::parse_file((a / "summary.toml").string());
  CHECK(summary["optimization"]["iterations"].value<std::int64_t>().has_value());
  std::filesystem::remove_all(base);
}
