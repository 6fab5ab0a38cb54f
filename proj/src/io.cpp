#include "vlasov/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#define TOML_HEADER_ONLY 1
#include <toml.hpp>

namespace vlasov {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path, const char* header) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << header << '\n';
  return out;
}

struct Row {
  std::ofstream& out;
  bool first = true;
  template <class T>
  Row& operator<<(const T& v) {
    if (!first) out << ',';
    first = false;
    if constexpr (std::is_floating_point_v<T>) {
      out << format_number(v);
    } else {
      out << v;
    }
    return *this;
  }
  ~Row() { out << '\n'; }
};

}  // namespace

void write_diagnostics_csv(const std::filesystem::path& path, const DiagnosticsSeries& d) {
  auto out = open_csv(path, kDiagnosticsHeader);
  for (std::size_t k = 0; k < d.t.size(); ++k) {
    Row r{out};
    r << k << d.t[k] << d.electric_energy[k];
    for (std::size_t s = 0; s < kNumSpecies; ++s) r << d.mean_x[s][k] << d.var_x[s][k] << d.max_deviation[s][k];
  }
}

void write_fields_csv(const std::filesystem::path& path, const ForwardTrajectory& traj) {
  auto out = open_csv(path, kFieldHeader);
  for (std::size_t k = 0; k < traj.electric.size(); ++k) {
    for (std::size_t i = 0; i < traj.electric[k].size(); ++i) {
      Row r{out};
      r << k << traj.time.t(k) << traj.grid.x_center(i) << traj.electric[k][i];
    }
  }
}

void write_phase_csv(const std::filesystem::path& path, const PerSpecies<SpeciesParticles>& species) {
  auto out = open_csv(path, kPhaseHeader);
  for (std::size_t s = 0; s < kNumSpecies; ++s) {
    for (const Particle& p : species[s].particles) {
      Row r{out};
      r << p.x << p.v1 << p.v2 << name(static_cast<Species>(s));
    }
  }
}

void write_gradient_csv(const std::filesystem::path& path, const GradientField& g, const TimeGrid& time,
                        const PhaseGrid& grid) {
  auto out = open_csv(path, kGradientHeader);
  for (std::size_t k = 0; k < g.G.n_times; ++k) {
    for (std::size_t i = 0; i < g.G.n_x; ++i) {
      Row r{out};
      r << k << i << time.t(k) << grid.x_center(i) << g.G(k, i) << g.grad_L2(k, i) << g.grad_V(k, i);
    }
  }
}

void write_adjoint_csv(const std::filesystem::path& path, const AdjointTrajectory& adj, const TimeGrid& time) {
  auto out = open_csv(path, kAdjointHeader);
  for (std::size_t k = 0; k < adj.stats.size(); ++k) {
    const AdjointStepStats& s = adj.stats[k];
    Row r{out};
    r << k << time.t(k) << s.n_lambda[0] << s.n_lambda[1] << (s.creation[0].created + s.creation[1].created)
      << (s.creation[0].clamped_cells + s.creation[1].clamped_cells);
  }
}

void write_control_csv(const std::filesystem::path& path, const ControlField& control) {
  auto out = open_csv(path, kControlHeader);
  for (std::size_t k = 0; k < control.values.n_times; ++k) {
    for (std::size_t i = 0; i < control.values.n_x; ++i) {
      Row r{out};
      r << k << i << control.time.t(k) << control.grid.x_center(i) << control.values(k, i);
    }
  }
}

void write_optimization_csv(const std::filesystem::path& path, const OptimizationReport& report) {
  auto out = open_csv(path, kOptimizationHeader);
  for (const IterationRecord& it : report.iterations) {
    Row r{out};
    r << it.iteration << it.cost << it.grad_norm_V << it.sigma << it.beta << it.evaluations << it.clamped
      << (it.restarted ? 1 : 0) << it.step_norm << it.max_dt_B << it.max_dx_B;
  }
}

void write_optimization_log(const std::filesystem::path& path, const OptimizationReport& report) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  for (const IterationRecord& it : report.iterations) {
    out << "iteration=" << it.iteration << " cost=" << format_number(it.cost)
        << " grad_norm_V=" << format_number(it.grad_norm_V) << " sigma=" << format_number(it.sigma)
        << " beta=" << format_number(it.beta) << " evaluations=" << it.evaluations << " clamped=" << it.clamped
        << " restarted=" << (it.restarted ? "true" : "false") << " step_norm=" << format_number(it.step_norm)
        << " max_dt_B=" << format_number(it.max_dt_B) << " max_dx_B=" << format_number(it.max_dx_B) << '\n';
  }
  out << "final_cost=" << format_number(report.final_cost) << '\n';
  out << "converged=" << (report.converged ? "true" : "false") << '\n';
  out << "line_search_failed=" << (report.line_search_failed ? "true" : "false") << '\n';
  out << "stop_reason=" << report.stop_reason << '\n';
}

void Summary::set(const std::string& section, const std::string& key, Value value) {
  auto sec = std::find_if(sections_.begin(), sections_.end(), [&](const auto& s) { return s.first == section; });
  if (sec == sections_.end()) {
    sections_.push_back({section, {}});
    sec = std::prev(sections_.end());
  }
  for (auto& kv : sec->second) {
    if (kv.first == key) {
      kv.second = std::move(value);
      return;
    }
  }
  sec->second.emplace_back(key, std::move(value));
}

std::string Summary::to_toml() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [section, entries] : sections_) {
    if (!first) out << '\n';
    first = false;
    out << '[' << section << "]\n";
    for (const auto& [key, value] : entries) {
      out << key << " = ";
      std::visit(
          [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              if (std::isnan(v)) {
                out << "nan";
              } else if (std::isinf(v)) {
                out << (v > 0 ? "inf" : "-inf");
              } else {
                std::string s = format_number(v);
                if (s.find_first_of(".eE") == std::string::npos) s += ".0";
                out << s;
              }
            } else if constexpr (std::is_same_v<T, bool>) {
              out << (v ? "true" : "false");
            } else if constexpr (std::is_same_v<T, std::string>) {
              out << toml::value<std::string>(v);
            } else {
              out << v;
            }
          },
          value);
      out << '\n';
    }
  }
  return out.str();
}

void Summary::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << to_toml();
}

}  // namespace vlasov
