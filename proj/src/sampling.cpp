#include "vlasov/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "vlasov/errors.hpp"

namespace vlasov {

namespace {

double normal_pdf(double s, double mean, double sigma) {
  const double z = (s - mean) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double normal_cdf(double s, double mean, double sigma) {
  return 0.5 * std::erfc(-(s - mean) / (sigma * std::numbers::sqrt2));
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

double axis_pdf(const AxisDensity& axis, double s) {
  return std::visit(
      overloaded{
          [s](const UniformAxis& a) { return (s >= a.lo && s < a.hi) ? 1.0 / (a.hi - a.lo) : 0.0; },
          [s](const NormalAxis& a) { return normal_pdf(s, a.mean, a.sigma); },
          [s](const BimodalNormalAxis& a) {
            return 0.5 * (normal_pdf(s, -a.center, a.sigma) + normal_pdf(s, a.center, a.sigma));
          },
      },
      axis);
}

double axis_cdf(const AxisDensity& axis, double s) {
  return std::visit(
      overloaded{
          [s](const UniformAxis& a) {
            if (s <= a.lo) return 0.0;
            if (s >= a.hi) return 1.0;
            return (s - a.lo) / (a.hi - a.lo);
          },
          [s](const NormalAxis& a) { return normal_cdf(s, a.mean, a.sigma); },
          [s](const BimodalNormalAxis& a) {
            return 0.5 * (normal_cdf(s, -a.center, a.sigma) + normal_cdf(s, a.center, a.sigma));
          },
      },
      axis);
}

double axis_sample(const AxisDensity& axis, RandomStream& rng) {
  return std::visit(
      overloaded{
          [&rng](const UniformAxis& a) { return rng.uniform(a.lo, a.hi); },
          [&rng](const NormalAxis& a) { return rng.normal(a.mean, a.sigma); },
          [&rng](const BimodalNormalAxis& a) {
            const double c = rng.uniform() < 0.5 ? -a.center : a.center;
            return rng.normal(c, a.sigma);
          },
      },
      axis);
}

double ProductDensity::pdf(const Particle& z) const {
  return axis_pdf(x, z.x) * axis_pdf(v1, z.v1) * axis_pdf(v2, z.v2);
}

Particle ProductDensity::sample(RandomStream& rng) const {
  Particle p;
  p.x = axis_sample(x, rng);
  p.v1 = axis_sample(v1, rng);
  p.v2 = axis_sample(v2, rng);
  return p;
}

std::vector<Particle> sample_direct(const DensitySpec& density, std::size_t n, double p_max,
                                    RandomStream& rng) {
  const auto* product = std::get_if<ProductDensity>(&density);
  if (product == nullptr) {
    throw std::invalid_argument("sample_direct: tabulated densities need acceptance-rejection");
  }
  std::vector<Particle> out;
  out.reserve(n);
  for (std::size_t p = 0; p < n; ++p) {
    Particle z = product->sample(rng);
    z.x = wrap_position(z.x, p_max);
    out.push_back(z);
  }
  return out;
}

std::vector<Particle> sample_rejection(const std::function<double(const Particle&)>& g,
                                       const ProductDensity& helper, double envelope,
                                       std::size_t n, double p_max, RandomStream& rng,
                                       const RejectionOptions& options) {
  if (!(envelope > 0.0)) throw std::invalid_argument("sample_rejection: envelope must be positive");
  const std::size_t window =
      options.window != 0
          ? options.window
          : static_cast<std::size_t>(std::max(1000.0, 100.0 / options.min_acceptance));

  std::vector<Particle> out;
  out.reserve(n);
  std::size_t proposals_in_window = 0;
  std::size_t accepted_in_window = 0;
  while (out.size() < n) {
    const Particle y = helper.sample(rng);
    const double u = rng.uniform();
    const double target = g(y);
    const double bound = envelope * helper.pdf(y);
    if (target > bound * (1.0 + 1e-12)) {
      throw EnvelopeViolation("acceptance-rejection envelope violated: g(y) = " +
                              std::to_string(target) + " > k h(y) = " + std::to_string(bound));
    }
    ++proposals_in_window;
    if (bound > 0.0 && u < target / bound) {
      Particle z = y;
      z.x = wrap_position(z.x, p_max);
      out.push_back(z);
      ++accepted_in_window;
    }
    if (proposals_in_window == window) {
      const double rate = static_cast<double>(accepted_in_window) / static_cast<double>(window);
      if (rate < options.min_acceptance) {
        throw NonTermination("acceptance-rejection stalled: acceptance rate " + std::to_string(rate) +
                             " over the last " + std::to_string(window) + " proposals");
      }
      proposals_in_window = 0;
      accepted_in_window = 0;
    }
  }
  return out;
}

std::vector<Particle> sample(const DensitySpec& density, std::size_t n, double p_max,
                             RandomStream& rng, const RejectionOptions& options) {
  if (const auto* t = std::get_if<TabulatedDensity>(&density)) {
    return sample_rejection(t->g, t->helper, t->envelope, n, p_max, rng, options);
  }
  return sample_direct(density, n, p_max, rng);
}

double density_value(const DensitySpec& density, const Particle& z) {
  if (const auto* t = std::get_if<TabulatedDensity>(&density)) return t->g(z);
  return std::get<ProductDensity>(density).pdf(z);
}

double bump(double r) {
  const double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r2));
}

TabulatedDensity landau_density(double p_max, double alpha, double wave_number) {
  TabulatedDensity d;
  d.g = [alpha, wave_number](const Particle& z) {
    const double v2 = z.v1 * z.v1 + z.v2 * z.v2;
    return std::exp(-0.5 * v2) / (2.0 * std::numbers::pi) * (1.0 + alpha * std::cos(wave_number * z.x));
  };
  d.helper = uniform_maxwellian(p_max, 1.0);
  d.envelope = p_max * (1.0 + std::abs(alpha));
  return d;
}

ProductDensity uniform_maxwellian(double p_max, double sigma) {
  return {UniformAxis{0.0, p_max}, NormalAxis{0.0, sigma}, NormalAxis{0.0, sigma}};
}

ProductDensity two_stream_density(double p_max, double v_beam, double sigma_beam, double sigma_v2) {
  return {UniformAxis{0.0, p_max}, BimodalNormalAxis{v_beam, sigma_beam}, NormalAxis{0.0, sigma_v2}};
}

TabulatedDensity bump_density(double center, double width_x, double width_v) {
  TabulatedDensity d;
  d.g = [center, width_x, width_v](const Particle& z) {
    return bump((z.x - center) / width_x) * bump(z.v1 / width_v) * bump(z.v2 / width_v);
  };
  d.helper = {UniformAxis{center - width_x, center + width_x}, UniformAxis{-width_v, width_v},
              UniformAxis{-width_v, width_v}};
  // Each bump factor peaks at exp(-1); the helper density is 1 / box volume.
  const double box_volume = 8.0 * width_x * width_v * width_v;
  d.envelope = std::exp(-3.0) * box_volume;
  return d;
}

}  // namespace vlasov
