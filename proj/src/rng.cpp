#include "pkco/rng.hpp"

#include <cmath>

namespace pkco {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  // seed_seq's generation algorithm is fully specified, so the engine state is
  // identical on every conforming implementation.
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

RngStream RngStream::for_node(std::uint64_t seed, std::uint32_t node_id,
                              NoiseSource source) {
  return RngStream(seed, (static_cast<std::uint64_t>(node_id) << 8) |
                             static_cast<std::uint64_t>(source));
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

double RngStream::gaussian(double mean, double variance) {
  const double z = gaussian();
  if (variance <= 0.0) return mean;
  return mean + std::sqrt(variance) * z;
}

}  // namespace pkco
