#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pkco/clock.hpp"
#include "pkco/control.hpp"
#include "pkco/delay.hpp"
#include "pkco/rng.hpp"
#include "pkco/units.hpp"

namespace pkco {

/// One slave node synchronising to the ideal master.
struct NodeConfig {
  std::uint32_t node_id = 1;
  ClockParams clock;
  DelayModel kappa;  ///< packet exchange delay
  DelayModel eta;    ///< processing delay
  ControllerConfig controller;
  Seconds initial_offset = 0.0;
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::vector<NodeConfig> nodes;
  Seconds cycle_period = 1.0;
  std::uint64_t num_cycles = 100;
  std::uint64_t seed = 1;
  Representation mode = Representation::continuous;
  /// Two firings closer than this collide.
  Seconds guard_window = 1e-3;
  /// When set, a slave firing within the guard of the master's own Sync also
  /// counts as a collision. Off by default: only slave pairs are compared.
  bool master_in_collision_domain = false;

  /// Throws std::invalid_argument naming the offending field
  /// ("node.3.controller.slot_reference: ...").
  void validate() const;

  /// Non-fatal findings such as gains outside the stable region.
  std::vector<std::string> warnings() const;

  const NodeConfig& node(std::uint32_t node_id) const;
};

/// Everything observed for one node in one cycle. Times are relative to the
/// master firing that opens the cycle unless stated otherwise.
struct CycleRecord {
  std::uint64_t cycle = 0;
  std::uint32_t node_id = 0;
  Seconds kappa_sample = 0.0;
  Seconds eta_sample = 0.0;
  Seconds timestamp = 0.0;        ///< counter reading on Sync reception
  Seconds offset_estimate = 0.0;
  Seconds correction = 0.0;       ///< u, the offset increase requested
  Seconds offset_after = 0.0;     ///< after correction and noise, in [-T/2, T/2)
  Seconds fire_time_rel = 0.0;    ///< slave firing minus next master firing
  Seconds delta = 0.0;
  bool collided = false;

  friend bool operator==(const CycleRecord&, const CycleRecord&) = default;
};

/// Mutable per-node simulation state: the clock and its three noise streams.
struct NodeRuntime {
  ClockState clock;
  RngStream kappa_rng;
  RngStream eta_rng;
  RngStream offset_rng;
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(std::uint64_t cycle, std::uint32_t node_id,
                  const std::string& what);

  std::uint64_t cycle() const { return cycle_; }
  std::uint32_t node_id() const { return node_id_; }

 private:
  std::uint64_t cycle_;
  std::uint32_t node_id_;
};

/// Precision of one firing: master_fire - slot - slave_fire.
Seconds delta_metric(Seconds master_fire, Seconds slot, Seconds slave_fire);

/// Node states at the first master firing, in scenario node order.
std::vector<NodeRuntime> initial_runtime(const ScenarioConfig& scenario);

/**
 * Simulates cycle `cycle_index` for every node and advances `nodes` to the
 * next master firing. Returns one record per node in scenario order.
 *
 * Throws SimulationError when a node's kappa + eta reaches the cycle period.
 */
std::vector<CycleRecord> step_cycle(const ScenarioConfig& scenario,
                                    std::vector<NodeRuntime>& nodes,
                                    std::uint64_t cycle_index);

struct RunResult {
  ScenarioConfig scenario;  ///< validated copy with nodes sorted by id
  std::vector<CycleRecord> records;  ///< ordered by (cycle, node_id)
  std::vector<NodeRuntime> final_nodes;
};

/// Runs all cycles. Output depends only on the scenario (including its seed).
RunResult run(const ScenarioConfig& scenario);

/// Continues a previous run for `scenario.num_cycles` more cycles.
RunResult run(const ScenarioConfig& scenario, std::vector<NodeRuntime> nodes,
              std::uint64_t first_cycle);

/// Records of one node, in cycle order.
std::vector<CycleRecord> records_for_node(const std::vector<CycleRecord>& records,
                                          std::uint32_t node_id);

}  // namespace pkco
