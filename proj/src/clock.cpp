#include "pkco/clock.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pkco {

namespace {

std::int64_t floor_mod(std::int64_t value, std::int64_t modulus) {
  const std::int64_t r = value % modulus;
  return r < 0 ? r + modulus : r;
}

double rate(const ClockParams& params) { return 1.0 + params.skew_ppm * 1e-6; }

// Moves a tick-mode state by `delta_ticks` (any sign), keeping the fractional
// part in [0, 1). Returns the number of threshold crossings (may be negative).
std::int64_t move_ticks(ClockState& state, const ClockParams& params,
                        double delta_ticks) {
  const double total = state.tick_fraction + delta_ticks;
  const double whole = std::floor(total);
  state.tick_fraction = total - whole;
  if (state.tick_fraction >= 1.0) state.tick_fraction = 0.0;
  const std::int64_t raw = state.counter + static_cast<std::int64_t>(whole);
  const std::int64_t wrapped = floor_mod(raw, params.cycle_ticks);
  state.counter = wrapped;
  state.phase = static_cast<double>(wrapped) * params.tick_period;
  return (raw - wrapped) / params.cycle_ticks;
}

}  // namespace

ClockParams ClockParams::from_frequency(double nominal_frequency,
                                        std::int64_t cycle_ticks) {
  ClockParams p;
  p.nominal_frequency = nominal_frequency;
  p.tick_period = 1.0 / nominal_frequency;
  p.cycle_ticks = cycle_ticks;
  p.threshold = static_cast<double>(cycle_ticks) / nominal_frequency;
  return p;
}

void ClockParams::validate(Representation representation) const {
  if (!(tick_period > 0.0)) throw std::invalid_argument("tick_period: must be > 0");
  if (!(threshold > 0.0)) throw std::invalid_argument("threshold: must be > 0");
  if (cycle_ticks < 1) throw std::invalid_argument("cycle_ticks: must be >= 1");
  if (!(offset_noise_variance >= 0.0)) {
    throw std::invalid_argument("offset_noise_variance: must be >= 0");
  }
  if (representation == Representation::ticks) {
    const double expected = static_cast<double>(cycle_ticks) * tick_period;
    if (std::abs(expected - threshold) > 1e-12 * threshold) {
      throw std::invalid_argument(
          "threshold: tick mode requires threshold == cycle_ticks * tick_period (" +
          std::to_string(threshold) + " vs " + std::to_string(expected) + ")");
    }
  }
}

Seconds wrap_phase(Seconds value, Seconds period) {
  double r = std::fmod(value, period);
  if (r < 0.0) {
    r += period;
    if (r >= period) r = 0.0;
  }
  return r;
}

Seconds wrap_signed(Seconds value, Seconds period) {
  double r = std::fmod(value, period);
  if (r >= 0.5 * period) {
    r -= period;
  } else if (r < -0.5 * period) {
    r += period;
  }
  return r;
}

ClockState make_state(const ClockParams& params, Representation representation,
                      Seconds offset) {
  ClockState s;
  s.representation = representation;
  s.offset = offset;
  const double phase = wrap_phase(offset, params.threshold);
  if (representation == Representation::continuous) {
    s.phase = phase;
  } else {
    move_ticks(s, params, phase / params.tick_period);
  }
  return s;
}

ClockState advance(const ClockState& state, const ClockParams& params,
                   Seconds duration) {
  if (duration < 0.0) throw std::invalid_argument("advance: negative duration");
  ClockState s = state;
  if (duration == 0.0) return s;
  const double k = rate(params);
  s.offset += duration * (k - 1.0);
  if (s.representation == Representation::continuous) {
    double p = s.phase + duration * k;
    double wraps = std::floor(p / params.threshold);
    p -= wraps * params.threshold;
    if (p >= params.threshold) {
      p -= params.threshold;
      wraps += 1.0;
    } else if (p < 0.0) {
      p += params.threshold;
      wraps -= 1.0;
    }
    s.phase = p;
    s.cycle_index += static_cast<std::uint64_t>(wraps);
  } else {
    const std::int64_t wraps = move_ticks(s, params, duration * k / params.tick_period);
    s.cycle_index += static_cast<std::uint64_t>(wraps);
  }
  return s;
}

ClockState shift(const ClockState& state, const ClockParams& params,
                 Seconds amount) {
  ClockState s = state;
  s.offset += amount;
  if (s.representation == Representation::continuous) {
    s.phase = wrap_phase(s.phase + amount, params.threshold);
  } else {
    move_ticks(s, params, amount / params.tick_period);
  }
  return s;
}

ClockState apply_offset_noise(const ClockState& state,
                              const ClockParams& params, RngStream& rng) {
  const double noise = rng.gaussian(0.0, params.offset_noise_variance);
  if (noise == 0.0) return state;
  return shift(state, params, noise);
}

Correction correct(const ClockState& state, const ClockParams& params,
                   Seconds amount) {
  Correction c;
  c.state = state;
  if (state.representation == Representation::continuous) {
    c.state.offset -= amount;
    c.state.phase = wrap_phase(state.phase - amount, params.threshold);
    c.applied = amount;
    c.residue = 0.0;
    return c;
  }
  const std::int64_t ticks = std::llround(amount / params.tick_period);
  c.applied = static_cast<double>(ticks) * params.tick_period;
  c.residue = amount - c.applied;
  c.state.offset -= c.applied;
  c.state.counter = floor_mod(state.counter - ticks, params.cycle_ticks);
  c.state.phase = static_cast<double>(c.state.counter) * params.tick_period;
  return c;
}

Seconds time_to_next_firing(const ClockState& state, const ClockParams& params) {
  if (state.representation == Representation::continuous) {
    return (params.threshold - state.phase) / rate(params);
  }
  const double remaining =
      static_cast<double>(params.cycle_ticks - state.counter) - state.tick_fraction;
  return remaining * params.tick_period / rate(params);
}

}  // namespace pkco
