#pragma once

#include <cstdint>
#include <random>

namespace pkco {

/// Noise sources that own a stream per node.
enum class NoiseSource : std::uint32_t { offset = 0, kappa = 1, eta = 2 };

/**
 * Deterministic random stream keyed by (seed, stream_id).
 *
 * mt19937_64 engine; uniform and Gaussian variates are computed in-house,
 * so a seed gives the same sequence on every standard library.
 */
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  /// Stream for one (node, source) pair.
  static RngStream for_node(std::uint64_t seed, std::uint32_t node_id,
                            NoiseSource source);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal variate (Marsaglia polar method).
  double gaussian();

  /// Normal variate with the given mean and variance. A zero variance still
  /// consumes one draw so stream positions do not depend on the parameters.
  double gaussian(double mean, double variance);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pkco
