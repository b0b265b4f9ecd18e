// Scenario builders and independent oracles shared by the test suites.
//
// The oracles deliberately avoid the library's clock and controller code: the
// offset recursion is iterated directly on real numbers.
#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "pkco/netsim.hpp"

namespace pkco::testing {

inline constexpr double kSimKappa = 349e-6;
inline constexpr double kSimEta = 514e-6;
inline constexpr double kSimNoiseVariance = 244.4990e-12;
inline constexpr double kTestbedKappa = 518.5e-6;
inline constexpr double kTestbedEta = 335.5e-6;
inline constexpr double kTick = 1.0 / 32768.0;

/// One-slave scenario with deterministic delays and no offset noise.
inline ScenarioConfig single_node(double alpha, double kappa, double eta,
                                  double theta0, std::uint64_t cycles,
                                  Representation mode = Representation::continuous) {
  NodeConfig n;
  n.node_id = 1;
  n.clock = ClockParams::from_frequency(32768.0, 32768);
  n.kappa = DelayModel{kappa, 0.0, 0.0};
  n.eta = DelayModel{eta, 0.0, 0.0};
  n.controller.alpha = alpha;
  n.controller.estimator_kappa = kappa;
  n.initial_offset = theta0;
  ScenarioConfig s;
  s.name = "test";
  s.nodes = {n};
  s.cycle_period = 1.0;
  s.num_cycles = cycles;
  s.seed = 7;
  s.mode = mode;
  return s;
}

inline void enable_feedforward(NodeConfig& n, double slot) {
  n.controller.slot_reference = slot;
  n.controller.feedforward_enabled = true;
  n.controller.feedforward = n.controller.alpha * n.kappa.mean + n.eta.mean;
}

/// theta_{k+1} = theta_k + alpha (t_d - theta_k - kappa) - eta + mu, iterated.
inline std::vector<double> iterate_recursion(double alpha, double kappa, double eta,
                                             double slot, double mu, double theta0,
                                             std::size_t steps) {
  std::vector<double> out{theta0};
  double theta = theta0;
  for (std::size_t k = 0; k < steps; ++k) {
    theta = theta + alpha * (slot - (theta + kappa)) - eta + mu;
    out.push_back(theta);
  }
  return out;
}

/// Representative of theta0 that the wrap-around estimator reads unambiguously.
inline double estimator_representative(double theta0, double period = 1.0) {
  double r = std::fmod(theta0, period);
  if (r >= 0.5 * period) r -= period;
  if (r < -0.5 * period) r += period;
  return r;
}

}  // namespace pkco::testing

namespace pkco {

inline void PrintTo(const CycleRecord& r, std::ostream* os) {
  *os << "{cycle " << r.cycle << ", node " << r.node_id << ", offset_after "
      << r.offset_after << ", delta " << r.delta << ", collided " << r.collided << "}";
}

}  // namespace pkco
