#include "vlasov/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#define TOML_HEADER_ONLY 1
#include <toml.hpp>

#include "vlasov/errors.hpp"

namespace vlasov {

namespace {

constexpr const char* kSpeciesKey[kNumSpecies] = {"electrons", "ions"};

TrackingWeights centered_tracking(double p_max, double c_theta, double c_phi, const PhasePoint& cov) {
  TrackingWeights w;
  const PhasePoint center{0.5 * p_max, 0.0, 0.0};
  w.c_theta = c_theta;
  w.cov_theta = cov;
  w.path_times = {0.0};
  w.path_points = {center};
  w.c_phi = c_phi;
  w.cov_phi = cov;
  w.terminal_target = center;
  return w;
}

ExperimentConfig base_config() {
  ExperimentConfig c;
  SpeciesConfig& e = c.species[to_index(Species::electrons)];
  e.mu_x = 1.0;
  e.mu_v = -1.0;
  SpeciesConfig& i = c.species[to_index(Species::ions)];
  i.mu_x = 1e-2;
  i.mu_v = 1e-2;
  return c;
}

}  // namespace

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig c = base_config();
  c.preset = name;
  SpeciesConfig& e = c.species[to_index(Species::electrons)];
  SpeciesConfig& ion = c.species[to_index(Species::ions)];
  if (name == "custom") return c;
  if (name == "landau") {
    c.mode = "simulate";
    c.p_max = 4.0 * std::numbers::pi;
    c.v_max = 10.0;
    c.n_x = 64;
    c.n_v = 64;
    c.t_final = 20.0;
    c.n_t = 400;
    e.n_particles = 200000;
    e.initial.kind = "landau";
    e.initial.alpha = 1.0;
    e.initial.wave_number = 0.5;
    ion.n_particles = 200000;
    ion.initial.kind = "maxwellian";
    ion.initial.sigma = 1.0;
    c.fit_t0 = 0.0;
    c.fit_t1 = c.t_final;
    c.output.dir = "out/landau";
    return c;
  }
  if (name == "two_stream") {
    c.mode = "simulate";
    c.p_max = 8.0 * std::numbers::pi;
    c.v_max = 10.0;
    c.n_x = 64;
    c.n_v = 64;
    c.t_final = 40.0;
    c.n_t = 400;
    e.n_particles = 200000;
    e.initial.kind = "two_stream";
    e.initial.v_beam = 3.0;
    e.initial.sigma_beam = 0.5;
    e.initial.sigma_v2 = 0.05;
    ion.n_particles = 200000;
    ion.initial.kind = "maxwellian";
    ion.initial.sigma = 1.0;
    ion.frozen = true;
    c.output.dir = "out/two_stream";
    return c;
  }
  if (name == "confinement") {
    c.mode = "optimize";
    c.p_max = 4.0 * std::numbers::pi;
    c.v_max = 6.0;
    c.n_x = 16;
    c.n_v = 16;
    c.t_final = 4.0;
    c.n_t = 20;
    for (SpeciesConfig* s : {&e, &ion}) {
      s->n_particles = 20000;
      s->total_mass = 0.1;
      s->initial.kind = "bump";
      s->initial.width_x = 0.25 * c.p_max;
      s->initial.width_v = 3.0;
      s->tracking = centered_tracking(c.p_max, 1.0, 1.0, PhasePoint{4.0, 16.0, 16.0});
    }
    // tracking must not be drowned by the penalty
    c.penalty = PenaltyConfig{1e-7, 1.0, 1.0};
    c.adjoint.n_terminal = 20000;
    c.ncg.l_max = 20;
    c.ncg.initial_step = 2.0;
    c.output.dir = "out/confinement";
    return c;
  }
  throw ConfigInvalid("experiment.preset: unknown preset '" + name +
                      "' (expected landau, two_stream, confinement or custom)");
}

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigInvalid(what);
  };
  require(c.preset == "landau" || c.preset == "two_stream" || c.preset == "confinement" || c.preset == "custom",
          "experiment.preset: unknown preset '" + c.preset + "'");
  require(c.mode == "simulate" || c.mode == "optimize", "experiment.mode must be 'simulate' or 'optimize'");
  require(c.seed <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()),
          "experiment.seed must fit in a signed 64-bit integer");
  require(c.threads >= 1, "experiment.threads must be >= 1");
  require(std::isfinite(c.p_max) && c.p_max > 0.0, "grid.p_max must be > 0");
  require(std::isfinite(c.v_max) && c.v_max > 0.0, "grid.v_max must be > 0");
  require(c.n_x >= 2, "grid.n_x must be >= 2");
  require(c.n_v >= 2, "grid.n_v must be >= 2");
  require(std::isfinite(c.t_final) && c.t_final > 0.0, "time.t_final must be > 0");
  require(c.n_t >= 1, "time.n_t must be >= 1");
  require(c.neutrality_tol > 0.0, "forward.neutrality_tol must be > 0");
  require(c.max_escape_fraction > 0.0 && c.max_escape_fraction <= 1.0,
          "forward.max_escape_fraction must lie in (0, 1]");
  for (std::size_t s = 0; s < kNumSpecies; ++s) {
    const std::string key = kSpeciesKey[s];
    const SpeciesConfig& sp = c.species[s];
    require(std::isfinite(sp.mu_x) && sp.mu_x > 0.0, key + ".mu_x must be > 0");
    require(std::isfinite(sp.mu_v) && sp.mu_v != 0.0, key + ".mu_v must be nonzero");
    require(sp.n_particles >= 1, key + ".n_particles must be >= 1");
    require(sp.total_mass >= 0.0, key + ".total_mass must be >= 0");
    const InitialConfig& in = sp.initial;
    const std::string ik = key + ".initial";
    if (in.kind == "landau") {
      require(std::abs(in.alpha) <= 1.0, ik + ".alpha must satisfy |alpha| <= 1");
      require(in.wave_number > 0.0, ik + ".wave_number must be > 0");
    } else if (in.kind == "maxwellian") {
      require(in.sigma > 0.0, ik + ".sigma must be > 0");
    } else if (in.kind == "two_stream") {
      require(in.sigma_beam > 0.0, ik + ".sigma_beam must be > 0");
      require(in.sigma_v2 > 0.0, ik + ".sigma_v2 must be > 0");
      require(in.sigma_beam < in.v_beam, ik + ".sigma_beam must be smaller than v_beam");
    } else if (in.kind == "bump") {
      require(in.width_x > 0.0 && in.width_x <= 0.5 * c.p_max, ik + ".width_x must lie in (0, p_max/2]");
      require(in.width_v > 0.0 && in.width_v <= c.v_max, ik + ".width_v must lie in (0, v_max]");
    } else {
      throw ConfigInvalid(ik + ".kind: unknown initial density '" + in.kind + "'");
    }
    try {
      sp.tracking.validate();
    } catch (const std::invalid_argument& err) {
      throw ConfigInvalid(key + ".tracking: " + err.what());
    }
  }
  c.penalty.validate();
  require(c.adjoint.n_terminal >= 1, "adjoint.n_terminal must be >= 1");
  require(c.adjoint.particle_weight >= 0.0, "adjoint.particle_weight must be >= 0");
  c.ncg.validate();
  require(c.fit_t0 < c.fit_t1, "analysis.fit_t0 must be smaller than analysis.fit_t1");
  require(c.gradcheck.directions >= 1, "gradcheck.directions must be >= 1");
  require(c.gradcheck.epsilon > 0.0, "gradcheck.epsilon must be > 0");
  require(c.gradcheck.tolerance > 0.0, "gradcheck.tolerance must be > 0");
  require(c.gradcheck.modes >= 1, "gradcheck.modes must be >= 1");
  require(!c.output.dir.empty(), "output.dir must not be empty");
}

namespace {

class Reader {
 public:
  explicit Reader(const toml::table& root) : root_(root) {}

  bool has(const std::string& path) const { return static_cast<bool>(root_.at_path(path)); }

  void require(const std::string& path) const {
    if (!has(path)) throw ConfigInvalid("missing required key '" + path + "'");
  }

  void get(const std::string& path, double& out) {
    auto node = lookup(path);
    if (!node) return;
    if (auto v = node.value<double>()) {
      out = *v;
    } else {
      throw ConfigInvalid(path + ": expected a number");
    }
  }

  void get(const std::string& path, std::size_t& out) {
    auto node = lookup(path);
    if (!node) return;
    auto v = node.as_integer();
    if (!v || v->get() < 0) throw ConfigInvalid(path + ": expected a non-negative integer");
    out = static_cast<std::size_t>(v->get());
  }

  void get(const std::string& path, bool& out) {
    auto node = lookup(path);
    if (!node) return;
    auto v = node.as_boolean();
    if (!v) throw ConfigInvalid(path + ": expected true or false");
    out = v->get();
  }

  void get(const std::string& path, std::string& out) {
    auto node = lookup(path);
    if (!node) return;
    auto v = node.as_string();
    if (!v) throw ConfigInvalid(path + ": expected a string");
    out = v->get();
  }

  void get(const std::string& path, PhasePoint& out) {
    auto node = lookup(path);
    if (!node) return;
    out = point(node.as_array(), path);
  }

  void get(const std::string& path, std::vector<double>& out) {
    auto node = lookup(path);
    if (!node) return;
    const toml::array* arr = node.as_array();
    if (!arr) throw ConfigInvalid(path + ": expected an array of numbers");
    out.clear();
    for (const auto& el : *arr) {
      auto v = el.value<double>();
      if (!v) throw ConfigInvalid(path + ": expected an array of numbers");
      out.push_back(*v);
    }
  }

  void get(const std::string& path, std::vector<PhasePoint>& out) {
    auto node = lookup(path);
    if (!node) return;
    const toml::array* arr = node.as_array();
    if (!arr) throw ConfigInvalid(path + ": expected an array of [x, v1, v2] triples");
    out.clear();
    for (const auto& el : *arr) out.push_back(point(el.as_array(), path));
  }

  /// Rejects keys that no get() call consumed.
  void check_unknown() const { walk(root_, ""); }

 private:
  toml::node_view<const toml::node> lookup(const std::string& path) {
    used_.insert(path);
    return root_.at_path(path);
  }

  static PhasePoint point(const toml::array* arr, const std::string& path) {
    if (!arr || arr->size() != 3) throw ConfigInvalid(path + ": expected [x, v1, v2]");
    PhasePoint p{};
    for (std::size_t a = 0; a < 3; ++a) {
      auto v = arr->get(a)->value<double>();
      if (!v) throw ConfigInvalid(path + ": expected [x, v1, v2]");
      p[a] = *v;
    }
    return p;
  }

  void walk(const toml::table& table, const std::string& prefix) const {
    for (const auto& [key, node] : table) {
      const std::string path = prefix.empty() ? std::string(key.str()) : prefix + "." + std::string(key.str());
      if (const toml::table* sub = node.as_table()) {
        walk(*sub, path);
      } else if (!used_.contains(path)) {
        throw ConfigInvalid("unknown key '" + path + "'");
      }
    }
  }

  const toml::table& root_;
  std::set<std::string> used_;
};

void read_tracking(Reader& r, const std::string& p, TrackingWeights& w) {
  r.get(p + ".c_theta", w.c_theta);
  r.get(p + ".cov_theta", w.cov_theta);
  r.get(p + ".path_times", w.path_times);
  r.get(p + ".path_points", w.path_points);
  r.get(p + ".c_phi", w.c_phi);
  r.get(p + ".cov_phi", w.cov_phi);
  r.get(p + ".terminal_target", w.terminal_target);
}

std::string stencil_name(VelocityStencil s) { return s == VelocityStencil::forward ? "forward" : "central"; }
std::string estimator_name(DerivativeEstimator e) {
  return e == DerivativeEstimator::tensor ? "tensor" : "particle";
}
std::string scaling_name(GradientScaling s) {
  return s == GradientScaling::raw_index ? "raw_index" : "continuum";
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& err) {
    std::ostringstream msg;
    msg << "TOML syntax error: " << err.description() << " at line " << err.source().begin.line;
    throw ConfigInvalid(msg.str());
  }
  Reader r(root);
  r.require("experiment.preset");
  std::string preset;
  r.get("experiment.preset", preset);
  ExperimentConfig c = preset_config(preset);
  if (preset == "custom") {
    for (const char* key : {"grid.p_max", "grid.v_max", "grid.n_x", "grid.n_v", "time.t_final", "time.n_t",
                            "electrons.initial.kind", "ions.initial.kind", "electrons.n_particles",
                            "ions.n_particles"}) {
      r.require(key);
    }
  }

  r.get("experiment.mode", c.mode);
  static_assert(std::is_same_v<std::uint64_t, std::size_t>);
  r.get("experiment.seed", c.seed);
  r.get("experiment.threads", c.threads);
  r.get("grid.p_max", c.p_max);
  r.get("grid.v_max", c.v_max);
  r.get("grid.n_x", c.n_x);
  r.get("grid.n_v", c.n_v);
  r.get("time.t_final", c.t_final);
  r.get("time.n_t", c.n_t);
  r.get("forward.neutrality_tol", c.neutrality_tol);
  r.get("forward.max_escape_fraction", c.max_escape_fraction);
  for (std::size_t s = 0; s < kNumSpecies; ++s) {
    const std::string p = kSpeciesKey[s];
    SpeciesConfig& sp = c.species[s];
    r.get(p + ".mu_x", sp.mu_x);
    r.get(p + ".mu_v", sp.mu_v);
    r.get(p + ".n_particles", sp.n_particles);
    r.get(p + ".total_mass", sp.total_mass);
    r.get(p + ".frozen", sp.frozen);
    InitialConfig& in = sp.initial;
    r.get(p + ".initial.kind", in.kind);
    r.get(p + ".initial.alpha", in.alpha);
    r.get(p + ".initial.wave_number", in.wave_number);
    r.get(p + ".initial.sigma", in.sigma);
    r.get(p + ".initial.v_beam", in.v_beam);
    r.get(p + ".initial.sigma_beam", in.sigma_beam);
    r.get(p + ".initial.sigma_v2", in.sigma_v2);
    r.get(p + ".initial.width_x", in.width_x);
    r.get(p + ".initial.width_v", in.width_v);
    read_tracking(r, p + ".tracking", sp.tracking);
  }
  r.get("penalty.alpha", c.penalty.alpha);
  r.get("penalty.kappa_t", c.penalty.kappa_t);
  r.get("penalty.kappa_x", c.penalty.kappa_x);
  r.get("adjoint.n_terminal", c.adjoint.n_terminal);
  r.get("adjoint.particle_weight", c.adjoint.particle_weight);
  r.get("adjoint.creation", c.adjoint.creation);
  std::string stencil = stencil_name(c.adjoint.stencil);
  r.get("adjoint.stencil", stencil);
  if (stencil == "central") {
    c.adjoint.stencil = VelocityStencil::central;
  } else if (stencil == "forward") {
    c.adjoint.stencil = VelocityStencil::forward;
  } else {
    throw ConfigInvalid("adjoint.stencil must be 'central' or 'forward'");
  }
  c.gradient.stencil = c.adjoint.stencil;
  std::string estimator = estimator_name(c.adjoint.estimator);
  r.get("adjoint.estimator", estimator);
  if (estimator == "particle") {
    c.adjoint.estimator = DerivativeEstimator::particle;
  } else if (estimator == "tensor") {
    c.adjoint.estimator = DerivativeEstimator::tensor;
  } else {
    throw ConfigInvalid("adjoint.estimator must be 'particle' or 'tensor'");
  }
  c.gradient.estimator = c.adjoint.estimator;
  std::string scaling = scaling_name(c.gradient.scaling);
  r.get("gradient.scaling", scaling);
  if (scaling == "continuum") {
    c.gradient.scaling = GradientScaling::continuum;
  } else if (scaling == "raw_index") {
    c.gradient.scaling = GradientScaling::raw_index;
  } else {
    throw ConfigInvalid("gradient.scaling must be 'continuum' or 'raw_index'");
  }
  r.get("ncg.tol", c.ncg.tol);
  r.get("ncg.l_max", c.ncg.l_max);
  r.get("ncg.armijo_c1", c.ncg.armijo_c1);
  r.get("ncg.armijo_shrink", c.ncg.armijo_shrink);
  r.get("ncg.sigma_init", c.ncg.sigma_init);
  r.get("ncg.initial_step", c.ncg.initial_step);
  r.get("ncg.restart_every", c.ncg.restart_every);
  r.get("ncg.max_backtracks", c.ncg.max_backtracks);
  r.get("analysis.fit_t0", c.fit_t0);
  r.get("analysis.fit_t1", c.fit_t1);
  r.get("analysis.fit_envelope_only", c.fit_envelope_only);
  r.get("gradcheck.directions", c.gradcheck.directions);
  r.get("gradcheck.epsilon", c.gradcheck.epsilon);
  r.get("gradcheck.tolerance", c.gradcheck.tolerance);
  r.get("gradcheck.base_control", c.gradcheck.base_control);
  r.get("gradcheck.modes", c.gradcheck.modes);
  r.get("output.dir", c.output.dir);
  r.get("output.diagnostics", c.output.diagnostics);
  r.get("output.fields", c.output.fields);
  r.get("output.phase", c.output.phase);
  r.get("output.gradient", c.output.gradient);
  r.get("output.adjoint", c.output.adjoint);
  r.check_unknown();
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

namespace {

toml::array to_array(const PhasePoint& p) { return toml::array{p[0], p[1], p[2]}; }

toml::array to_array(const std::vector<double>& v) {
  toml::array a;
  for (double x : v) a.push_back(x);
  return a;
}

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

}  // namespace

std::string to_toml(const ExperimentConfig& c) {
  toml::table root;
  root.insert("experiment", toml::table{{"preset", c.preset},
                                        {"mode", c.mode},
                                        {"seed", static_cast<std::int64_t>(c.seed)},
                                        {"threads", as_int(c.threads)}});
  root.insert("grid", toml::table{{"p_max", c.p_max}, {"v_max", c.v_max}, {"n_x", as_int(c.n_x)}, {"n_v", as_int(c.n_v)}});
  root.insert("time", toml::table{{"t_final", c.t_final}, {"n_t", as_int(c.n_t)}});
  root.insert("forward", toml::table{{"neutrality_tol", c.neutrality_tol},
                                     {"max_escape_fraction", c.max_escape_fraction}});
  for (std::size_t s = 0; s < kNumSpecies; ++s) {
    const SpeciesConfig& sp = c.species[s];
    const InitialConfig& in = sp.initial;
    const TrackingWeights& w = sp.tracking;
    toml::array points;
    for (const auto& p : w.path_points) points.push_back(to_array(p));
    toml::table table{{"mu_x", sp.mu_x},
                      {"mu_v", sp.mu_v},
                      {"n_particles", as_int(sp.n_particles)},
                      {"total_mass", sp.total_mass},
                      {"frozen", sp.frozen}};
    table.insert("initial", toml::table{{"kind", in.kind},
                                        {"alpha", in.alpha},
                                        {"wave_number", in.wave_number},
                                        {"sigma", in.sigma},
                                        {"v_beam", in.v_beam},
                                        {"sigma_beam", in.sigma_beam},
                                        {"sigma_v2", in.sigma_v2},
                                        {"width_x", in.width_x},
                                        {"width_v", in.width_v}});
    table.insert("tracking", toml::table{{"c_theta", w.c_theta},
                                         {"cov_theta", to_array(w.cov_theta)},
                                         {"path_times", to_array(w.path_times)},
                                         {"path_points", points},
                                         {"c_phi", w.c_phi},
                                         {"cov_phi", to_array(w.cov_phi)},
                                         {"terminal_target", to_array(w.terminal_target)}});
    root.insert(kSpeciesKey[s], table);
  }
  root.insert("penalty", toml::table{{"alpha", c.penalty.alpha},
                                     {"kappa_t", c.penalty.kappa_t},
                                     {"kappa_x", c.penalty.kappa_x}});
  root.insert("adjoint", toml::table{{"n_terminal", as_int(c.adjoint.n_terminal)},
                                     {"particle_weight", c.adjoint.particle_weight},
                                     {"stencil", stencil_name(c.adjoint.stencil)},
                                     {"estimator", estimator_name(c.adjoint.estimator)},
                                     {"creation", c.adjoint.creation}});
  root.insert("gradient", toml::table{{"scaling", scaling_name(c.gradient.scaling)}});
  root.insert("ncg", toml::table{{"tol", c.ncg.tol},
                                 {"l_max", as_int(c.ncg.l_max)},
                                 {"armijo_c1", c.ncg.armijo_c1},
                                 {"armijo_shrink", c.ncg.armijo_shrink},
                                 {"sigma_init", c.ncg.sigma_init},
                                 {"initial_step", c.ncg.initial_step},
                                 {"restart_every", as_int(c.ncg.restart_every)},
                                 {"max_backtracks", as_int(c.ncg.max_backtracks)}});
  root.insert("analysis", toml::table{{"fit_t0", c.fit_t0},
                                      {"fit_t1", c.fit_t1},
                                      {"fit_envelope_only", c.fit_envelope_only}});
  root.insert("gradcheck", toml::table{{"directions", as_int(c.gradcheck.directions)},
                                       {"epsilon", c.gradcheck.epsilon},
                                       {"tolerance", c.gradcheck.tolerance},
                                       {"base_control", c.gradcheck.base_control},
                                       {"modes", as_int(c.gradcheck.modes)}});
  root.insert("output", toml::table{{"dir", c.output.dir},
                                    {"diagnostics", c.output.diagnostics},
                                    {"fields", c.output.fields},
                                    {"phase", c.output.phase},
                                    {"gradient", c.output.gradient},
                                    {"adjoint", c.output.adjoint}});
  std::ostringstream out;
  out << root << "\n";
  return out.str();
}

DensitySpec make_density(const InitialConfig& in, double p_max) {
  if (in.kind == "landau") return landau_density(p_max, in.alpha, in.wave_number);
  if (in.kind == "maxwellian") return uniform_maxwellian(p_max, in.sigma);
  if (in.kind == "two_stream") return two_stream_density(p_max, in.v_beam, in.sigma_beam, in.sigma_v2);
  if (in.kind == "bump") return bump_density(0.5 * p_max, in.width_x, in.width_v);
  throw ConfigInvalid("unknown initial density '" + in.kind + "'");
}

ForwardSetup make_forward_setup(const ExperimentConfig& c) {
  ForwardSetup setup{PhaseGrid(c.p_max, c.v_max, c.n_x, c.n_v), TimeGrid(c.t_final, c.n_t), {}, c.neutrality_tol,
                     c.max_escape_fraction, c.threads};
  for (std::size_t s = 0; s < kNumSpecies; ++s) {
    const SpeciesConfig& sp = c.species[s];
    SpeciesSetup& out = setup.species[s];
    out.params = SpeciesParams{sp.mu_x, sp.mu_v, s == to_index(Species::electrons) ? -1 : +1};
    out.initial = make_density(sp.initial, c.p_max);
    out.n_particles = sp.n_particles;
    out.total_mass = sp.total_mass > 0.0 ? sp.total_mass : c.p_max;
    out.frozen = sp.frozen;
  }
  return setup;
}

ControlProblem make_problem(const ExperimentConfig& c) {
  ControlProblem p{make_forward_setup(c), {}, c.penalty, c.adjoint, c.gradient, c.seed};
  p.adjoint.threads = c.threads;
  for (std::size_t s = 0; s < kNumSpecies; ++s) p.tracking[s] = c.species[s].tracking;
  return p;
}

}  // namespace vlasov
