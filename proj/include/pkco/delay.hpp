#pragma once

#include "pkco/rng.hpp"
#include "pkco/units.hpp"

namespace pkco {

/// Gaussian delay, truncated below at `floor`.
struct DelayModel {
  Seconds mean = 0.0;
  double variance = 0.0;  ///< s^2
  Seconds floor = 0.0;

  /// Throws std::invalid_argument ("member: message") unless
  /// mean >= floor >= 0 and variance >= 0.
  void validate() const;
};

/// max(floor, N(mean, variance)); advances `rng` by one Gaussian draw.
Seconds sample(const DelayModel& model, RngStream& rng);

}  // namespace pkco
