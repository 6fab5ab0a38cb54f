#pragma once

#include <cstdint>
#include <random>

namespace vlasov {

/// Fixed substream identifiers. Every consumer of randomness draws from its own
/// substream derived from the master seed, so e.g. repeated forward solves
/// inside a line search see identical initial particles.
enum class StreamPurpose : std::uint64_t {
  initial_particles = 1,
  adjoint_terminal = 2,
  adjoint_creation = 3,
  gradcheck_directions = 4,
  test = 99,
};

/// Reproducible random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are implementation-defined, so the
/// uniform and normal transforms are implemented here: uniform() takes the top
/// 53 bits, normal() is the Box-Muller transform. Seeds are scrambled with
/// splitmix64 before seeding the engine.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  /// Independent stream for (master seed, purpose, index).
  static RandomStream substream(std::uint64_t master_seed, StreamPurpose purpose,
                                std::uint64_t index = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace vlasov
