#include "pkco/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace pkco {

namespace {

std::string node_field(std::uint32_t id, const std::string& field) {
  return "node." + std::to_string(id) + "." + field;
}

[[noreturn]] void reject(const std::string& field, const std::string& message) {
  throw std::invalid_argument(field + ": " + message);
}

// Re-raises a "member: message" error under `prefix`.
[[noreturn]] void reject_nested(const std::string& prefix, const std::invalid_argument& e) {
  const std::string what = e.what();
  const auto colon = what.find(": ");
  if (colon == std::string::npos) reject(prefix, what);
  reject(prefix + "." + what.substr(0, colon), what.substr(colon + 2));
}

ScenarioConfig sorted(const ScenarioConfig& scenario) {
  ScenarioConfig s = scenario;
  std::stable_sort(s.nodes.begin(), s.nodes.end(),
                   [](const NodeConfig& a, const NodeConfig& b) {
                     return a.node_id < b.node_id;
                   });
  return s;
}

// Circular distance between two firing instants on a cycle of length period.
double firing_distance(Seconds a, Seconds b, Seconds period) {
  return std::abs(wrap_signed(a - b, period));
}

}  // namespace

SimulationError::SimulationError(std::uint64_t cycle, std::uint32_t node_id,
                                 const std::string& what)
    : std::runtime_error("cycle " + std::to_string(cycle) + ", node " +
                         std::to_string(node_id) + ": " + what),
      cycle_(cycle),
      node_id_(node_id) {}

void ScenarioConfig::validate() const {
  if (nodes.empty()) reject("scenario.nodes", "at least one node is required");
  if (!(cycle_period > 0.0)) reject("scenario.cycle_period", "must be > 0");
  if (num_cycles < 1) reject("scenario.num_cycles", "must be >= 1");
  if (!(guard_window >= 0.0)) reject("scenario.guard_window", "must be >= 0");

  std::set<std::uint32_t> ids;
  for (const NodeConfig& n : nodes) {
    if (!ids.insert(n.node_id).second) {
      reject(node_field(n.node_id, "id"), "duplicate node id");
    }
    try {
      n.clock.validate(mode);
    } catch (const std::invalid_argument& e) {
      reject_nested("node." + std::to_string(n.node_id), e);
    }
    if (std::abs(n.clock.threshold - cycle_period) > 1e-12 * cycle_period) {
      reject(node_field(n.node_id, "threshold"),
             "must equal the cycle period");
    }
    try {
      n.kappa.validate();
    } catch (const std::invalid_argument& e) {
      reject_nested(node_field(n.node_id, "kappa"), e);
    }
    try {
      n.eta.validate();
    } catch (const std::invalid_argument& e) {
      reject_nested(node_field(n.node_id, "eta"), e);
    }
    const Seconds slot = n.controller.slot_reference;
    if (!(slot >= 0.0 && slot < n.clock.threshold)) {
      reject(node_field(n.node_id, "controller.slot_reference"),
             "must be in [0, threshold)");
    }
    if (!std::isfinite(n.controller.alpha)) {
      reject(node_field(n.node_id, "controller.alpha"), "must be finite");
    }
    if (!(std::abs(n.initial_offset) < n.clock.threshold)) {
      reject(node_field(n.node_id, "initial_offset"),
             "magnitude must be below the threshold");
    }
  }
}

std::vector<std::string> ScenarioConfig::warnings() const {
  std::vector<std::string> out;
  for (const NodeConfig& n : nodes) {
    if (!is_stable_gain(n.controller.alpha)) {
      std::ostringstream os;
      os << node_field(n.node_id, "controller.alpha") << ": " << n.controller.alpha
         << " is outside (0, 2); the loop is unstable";
      out.push_back(os.str());
    }
  }
  return out;
}

const NodeConfig& ScenarioConfig::node(std::uint32_t node_id) const {
  for (const NodeConfig& n : nodes) {
    if (n.node_id == node_id) return n;
  }
  throw std::out_of_range("no node with id " + std::to_string(node_id));
}

Seconds delta_metric(Seconds master_fire, Seconds slot, Seconds slave_fire) {
  return master_fire - slot - slave_fire;
}

std::vector<NodeRuntime> initial_runtime(const ScenarioConfig& scenario) {
  std::vector<NodeRuntime> out;
  out.reserve(scenario.nodes.size());
  for (const NodeConfig& n : scenario.nodes) {
    out.push_back(NodeRuntime{
        make_state(n.clock, scenario.mode, n.initial_offset),
        RngStream::for_node(scenario.seed, n.node_id, NoiseSource::kappa),
        RngStream::for_node(scenario.seed, n.node_id, NoiseSource::eta),
        RngStream::for_node(scenario.seed, n.node_id, NoiseSource::offset)});
  }
  return out;
}

std::vector<CycleRecord> step_cycle(const ScenarioConfig& scenario,
                                    std::vector<NodeRuntime>& nodes,
                                    std::uint64_t cycle_index) {
  const Seconds period = scenario.cycle_period;
  std::vector<CycleRecord> records;
  records.reserve(nodes.size());

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const NodeConfig& cfg = scenario.nodes[i];
    NodeRuntime& rt = nodes[i];
    const ClockParams& clock = cfg.clock;

    CycleRecord rec;
    rec.cycle = cycle_index;
    rec.node_id = cfg.node_id;
    rec.kappa_sample = sample(cfg.kappa, rt.kappa_rng);
    rec.eta_sample = sample(cfg.eta, rt.eta_rng);
    const Seconds busy = rec.kappa_sample + rec.eta_sample;
    if (busy >= period) {
      throw SimulationError(cycle_index, cfg.node_id,
                            "kappa + eta reaches the cycle period; the "
                            "correction would land in the next cycle");
    }

    // Master fires at t_k; the Sync is timestamped kappa later.
    ClockState s = advance(rt.clock, clock, rec.kappa_sample);
    rec.timestamp = s.phase;
    rec.offset_estimate = estimate_offset(rec.timestamp, clock.threshold,
                                          cfg.controller.estimator_kappa);

    // The correction lands eta after the timestamp.
    s = advance(s, clock, rec.eta_sample);
    rec.correction = control_input(cfg.controller, rec.offset_estimate,
                                   rec.eta_sample);
    s = correct(s, clock, -rec.correction).state;
    s = apply_offset_noise(s, clock, rt.offset_rng);
    s.offset = wrap_signed(s.offset, clock.threshold);
    rec.offset_after = s.offset;

    const Seconds fire = busy + time_to_next_firing(s, clock);
    rec.fire_time_rel = wrap_signed(fire - period, period);
    rec.delta = delta_metric(0.0, cfg.controller.slot_reference, rec.fire_time_rel);

    rt.clock = advance(s, clock, period - busy);
    if (scenario.mode == Representation::continuous) {
      // At the master firing the phase is the offset itself; re-deriving it
      // keeps sub-ulp corrections from separating the two.
      rt.clock.phase = wrap_phase(rt.clock.offset, clock.threshold);
    }
    records.push_back(rec);
  }

  const Seconds guard = scenario.guard_window;
  if (guard > 0.0) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (scenario.master_in_collision_domain &&
          firing_distance(records[i].fire_time_rel, 0.0, period) < guard) {
        records[i].collided = true;
      }
      for (std::size_t j = i + 1; j < records.size(); ++j) {
        if (firing_distance(records[i].fire_time_rel, records[j].fire_time_rel,
                            period) < guard) {
          records[i].collided = true;
          records[j].collided = true;
        }
      }
    }
  }
  return records;
}

RunResult run(const ScenarioConfig& scenario) {
  ScenarioConfig s = sorted(scenario);
  s.validate();
  std::vector<NodeRuntime> nodes = initial_runtime(s);
  return run(s, std::move(nodes), 0);
}

RunResult run(const ScenarioConfig& scenario, std::vector<NodeRuntime> nodes,
              std::uint64_t first_cycle) {
  RunResult result;
  result.scenario = sorted(scenario);
  result.scenario.validate();
  if (nodes.size() != result.scenario.nodes.size()) {
    throw std::invalid_argument("run: runtime/node count mismatch");
  }
  result.records.reserve(nodes.size() * scenario.num_cycles);
  for (std::uint64_t k = 0; k < result.scenario.num_cycles; ++k) {
    std::vector<CycleRecord> cycle =
        step_cycle(result.scenario, nodes, first_cycle + k);
    result.records.insert(result.records.end(), cycle.begin(), cycle.end());
  }
  result.final_nodes = std::move(nodes);
  return result;
}

std::vector<CycleRecord> records_for_node(const std::vector<CycleRecord>& records,
                                          std::uint32_t node_id) {
  std::vector<CycleRecord> out;
  for (const CycleRecord& r : records) {
    if (r.node_id == node_id) out.push_back(r);
  }
  return out;
}

}  // namespace pkco
