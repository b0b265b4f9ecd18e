#include "pkco/control.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pkco {

bool is_stable_gain(double alpha) { return std::abs(1.0 - alpha) < 1.0; }

Seconds estimate_offset(Seconds timestamp, Seconds threshold,
                        Seconds estimator_kappa) {
  if (!(timestamp >= 0.0 && timestamp < threshold)) {
    throw std::invalid_argument("estimate_offset: timestamp " +
                                std::to_string(timestamp) +
                                " outside [0, threshold)");
  }
  if (timestamp < 0.5 * threshold + estimator_kappa) return timestamp;
  return timestamp - threshold;
}

Seconds control_input(const ControllerConfig& config, Seconds offset_estimate,
                      Seconds eta_actual) {
  return config.alpha * (config.slot_reference - offset_estimate) - eta_actual +
         config.applied_feedforward();
}

Seconds feedforward_term(double alpha, Seconds kappa_mean, Seconds eta_mean) {
  return alpha * kappa_mean + eta_mean;
}

TheoryPrediction predict(const ControllerConfig& config, Seconds kappa_mean,
                         Seconds eta_mean) {
  TheoryPrediction p;
  p.eigenvalue = 1.0 - config.alpha;
  p.stable = is_stable_gain(config.alpha);
  // Fixed point of theta' = theta + alpha (t_d - theta - kappa) - eta + mu.
  p.asymptote = config.slot_reference - kappa_mean +
                (config.applied_feedforward() - eta_mean) / config.alpha;
  p.dc_gain = config.alpha / (1.0 - p.eigenvalue);
  return p;
}

Seconds expected_trajectory(const ControllerConfig& config, Seconds kappa_mean,
                            Seconds eta_mean, Seconds theta0, std::uint64_t k) {
  const TheoryPrediction p = predict(config, kappa_mean, eta_mean);
  if (k == 0) return theta0;
  return p.asymptote +
         std::pow(p.eigenvalue, static_cast<double>(k)) * (theta0 - p.asymptote);
}

}  // namespace pkco
