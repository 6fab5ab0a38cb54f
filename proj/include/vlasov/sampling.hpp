#pragma once

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "vlasov/domain.hpp"
#include "vlasov/random.hpp"

namespace vlasov {

struct UniformAxis {
  double lo = 0.0;
  double hi = 1.0;
};

struct NormalAxis {
  double mean = 0.0;
  double sigma = 1.0;
};

/// Equal mixture of N(-center, sigma^2) and N(+center, sigma^2).
struct BimodalNormalAxis {
  double center = 1.0;
  double sigma = 1.0;
};

using AxisDensity = std::variant<UniformAxis, NormalAxis, BimodalNormalAxis>;

double axis_pdf(const AxisDensity& axis, double s);
double axis_cdf(const AxisDensity& axis, double s);
double axis_sample(const AxisDensity& axis, RandomStream& rng);

/// Independent marginals in (x, v1, v2). Covers uniform boxes, diagonal
/// Gaussians and mixed products; these are sampled directly.
struct ProductDensity {
  AxisDensity x;
  AxisDensity v1;
  AxisDensity v2;

  double pdf(const Particle& z) const;
  Particle sample(RandomStream& rng) const;
};

/// Density known only pointwise, sampled by acceptance-rejection against a
/// helper product density with g <= envelope * helper everywhere.
struct TabulatedDensity {
  std::function<double(const Particle&)> g;
  ProductDensity helper;
  double envelope = 1.0;
};

using DensitySpec = std::variant<ProductDensity, TabulatedDensity>;

struct RejectionOptions {
  /// Abort when the acceptance rate over one window of proposals drops below this.
  double min_acceptance = 1e-4;
  /// Proposals per window; 0 picks max(1000, 100 / min_acceptance).
  std::size_t window = 0;
};

/// Draws n particles i.i.d. from a directly sampleable density; positions are
/// wrapped into [0, p_max). Throws std::invalid_argument for tabulated input.
std::vector<Particle> sample_direct(const DensitySpec& density, std::size_t n, double p_max,
                                    RandomStream& rng);

/// Acceptance-rejection: propose y ~ helper, accept when u < g(y) / (k helper(y)).
/// Produces exactly n particles. Throws EnvelopeViolation when a proposal has
/// g(y) > k helper(y) and NonTermination when acceptance stalls.
std::vector<Particle> sample_rejection(const std::function<double(const Particle&)>& g,
                                       const ProductDensity& helper, double envelope,
                                       std::size_t n, double p_max, RandomStream& rng,
                                       const RejectionOptions& options = {});

/// Dispatches to sample_direct or sample_rejection.
std::vector<Particle> sample(const DensitySpec& density, std::size_t n, double p_max,
                             RandomStream& rng, const RejectionOptions& options = {});

/// Evaluates the (possibly unnormalised) density at z.
double density_value(const DensitySpec& density, const Particle& z);

/// Smooth compactly supported bump exp(-1/(1 - r^2)) on |r| < 1, zero outside.
double bump(double r);

/// Perturbed Maxwellian (1/2pi) exp(-|v|^2/2) (1 + alpha cos(k x)) on [0, p_max),
/// with a uniform-in-x Gaussian-in-v helper and envelope p_max (1 + |alpha|).
TabulatedDensity landau_density(double p_max, double alpha, double wave_number);

/// Uniform in x on [0, p_max), Maxwellian with standard deviation sigma in v.
ProductDensity uniform_maxwellian(double p_max, double sigma = 1.0);

/// Uniform in x, two counter-streaming beams at +-v_beam in v1, narrow Gaussian in v2.
ProductDensity two_stream_density(double p_max, double v_beam, double sigma_beam,
                                  double sigma_v2);

/// Product of bumps centred at (center, 0, 0) with half-widths (width_x, width_v, width_v).
TabulatedDensity bump_density(double center, double width_x, double width_v);

}  // namespace vlasov
