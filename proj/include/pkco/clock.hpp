#pragma once

#include <cstdint>

#include "pkco/rng.hpp"
#include "pkco/units.hpp"

namespace pkco {

enum class Representation { continuous, ticks };

/**
 * Counter-based crystal-oscillator clock.
 *
 * The counter runs from zero up to `threshold`, then resets and fires. One
 * synchronisation cycle spans `cycle_ticks` oscillator periods, so in tick
 * mode `threshold == cycle_ticks * tick_period` must hold.
 */
struct ClockParams {
  double nominal_frequency = 32768.0;    ///< f0, Hz
  Seconds tick_period = 1.0 / 32768.0;   ///< 1 / f0
  Seconds threshold = 1.0;               ///< reset / firing level
  std::int64_t cycle_ticks = 32768;
  double offset_noise_variance = 0.0;    ///< per-cycle offset noise, s^2
  double skew_ppm = 0.0;

  /// Clock with the given frequency whose cycle is exactly `cycle_ticks` ticks.
  static ClockParams from_frequency(double nominal_frequency,
                                    std::int64_t cycle_ticks);

  /// Throws std::invalid_argument when an invariant is violated.
  void validate(Representation representation) const;
};

/**
 * Snapshot of one slave clock.
 *
 * `phase` is the counter reading in seconds, always in [0, threshold). In tick
 * mode it equals `counter * tick_period` and `tick_fraction` carries the
 * sub-tick position so that repeated short advances lose nothing.
 *
 * `offset` is the signed difference to the master state at the same instant.
 * It is only meaningful modulo the threshold.
 */
struct ClockState {
  Representation representation = Representation::continuous;
  Seconds phase = 0.0;
  std::int64_t counter = 0;
  double tick_fraction = 0.0;
  Seconds offset = 0.0;
  std::uint64_t cycle_index = 0;

  friend bool operator==(const ClockState&, const ClockState&) = default;
};

/// Result of a correction; tick mode rounds the requested amount.
struct Correction {
  ClockState state;
  Seconds applied = 0.0;
  Seconds residue = 0.0;  ///< requested - applied
};

/// State of a clock whose offset to the master (whose phase is zero) is
/// `offset`.
ClockState make_state(const ClockParams& params, Representation representation,
                      Seconds offset);

/// Free-running growth over `duration`. Each threshold crossing increments
/// `cycle_index`. Throws std::invalid_argument for negative durations.
ClockState advance(const ClockState& state, const ClockParams& params,
                   Seconds duration);

/// Adds one Gaussian(0, offset_noise_variance) draw to the offset and shifts
/// the phase by the same amount.
ClockState apply_offset_noise(const ClockState& state,
                              const ClockParams& params, RngStream& rng);

/// Shifts the clock by an explicit noise value (used by apply_offset_noise).
ClockState shift(const ClockState& state, const ClockParams& params,
                 Seconds amount);

/// offset -= amount, phase -= amount (mod threshold). Tick mode applies the
/// nearest whole number of ticks.
Correction correct(const ClockState& state, const ClockParams& params,
                   Seconds amount);

/// Time until the counter next reaches the threshold.
Seconds time_to_next_firing(const ClockState& state, const ClockParams& params);

/// Maps `value` into [0, period).
Seconds wrap_phase(Seconds value, Seconds period);

/// Maps `value` into [-period/2, period/2).
Seconds wrap_signed(Seconds value, Seconds period);

}  // namespace pkco
