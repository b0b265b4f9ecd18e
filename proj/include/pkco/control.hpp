#pragma once

#include <cstdint>

#include "pkco/units.hpp"

namespace pkco {

/**
 * Proportional clock-offset controller with optional delay compensation.
 *
 * Per cycle the offset moves by
 *   u = alpha * (slot_reference - estimate) - eta + mu,
 * where mu is `feedforward` when `feedforward_enabled` and zero otherwise.
 * The loop is stable for alpha in (0, 2); other gains are accepted so the
 * unstable region can be simulated.
 */
struct ControllerConfig {
  double alpha = 0.5;
  Seconds slot_reference = 0.0;
  Seconds feedforward = 0.0;
  bool feedforward_enabled = false;
  /// True when `feedforward` was set explicitly rather than derived from the
  /// mean delays; sweeps only re-derive non-fixed values.
  bool feedforward_fixed = false;
  /// Delay used in the wrap-around decision of the offset estimator.
  Seconds estimator_kappa = 0.0;

  /// mu actually added to the control input.
  Seconds applied_feedforward() const {
    return feedforward_enabled ? feedforward : 0.0;
  }
};

/// Closed-loop steady-state behaviour of one node.
struct TheoryPrediction {
  double eigenvalue = 0.0;  ///< 1 - alpha
  Seconds asymptote = 0.0;
  bool stable = false;
  double dc_gain = 1.0;     ///< slot_reference -> offset at z = 1
};

bool is_stable_gain(double alpha);

/**
 * Offset estimate from a timestamp taken on Sync reception.
 *
 * Timestamps below threshold/2 + estimator_kappa are read as positive
 * offsets, the rest as negative ones (timestamp - threshold).
 * Throws std::invalid_argument when the timestamp is outside [0, threshold).
 */
Seconds estimate_offset(Seconds timestamp, Seconds threshold,
                        Seconds estimator_kappa);

/// Amount by which the clock offset increases this cycle.
Seconds control_input(const ControllerConfig& config, Seconds offset_estimate,
                      Seconds eta_actual);

/// Feedforward that places the fixed point exactly on the slot reference:
/// alpha * kappa_mean + eta_mean.
Seconds feedforward_term(double alpha, Seconds kappa_mean, Seconds eta_mean);

/// Steady state of the noise-free loop under mean delays.
TheoryPrediction predict(const ControllerConfig& config, Seconds kappa_mean,
                         Seconds eta_mean);

/// Noise-free offset after k cycles: asymptote + (1 - alpha)^k (theta0 - asymptote).
Seconds expected_trajectory(const ControllerConfig& config, Seconds kappa_mean,
                            Seconds eta_mean, Seconds theta0, std::uint64_t k);

}  // namespace pkco
