#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pkco/control.hpp"
#include "pkco/netsim.hpp"

namespace pkco {

struct ConvergenceReport {
  bool converged = false;
  /// First cycle from which every later offset stays inside the tolerance
  /// band around the theoretical asymptote. Empty when not converged.
  std::optional<std::uint64_t> settling_cycle;
  Seconds steady_mean = 0.0;  ///< trailing-window mean of offset_after
  Seconds steady_std = 0.0;   ///< trailing-window sample standard deviation
  Seconds theory_asymptote = 0.0;
  Seconds abs_error_vs_theory = 0.0;
  Seconds max_abs_delta = 0.0;
  std::uint64_t collision_count = 0;

  friend bool operator==(const ConvergenceReport&, const ConvergenceReport&) = default;
};

inline constexpr std::size_t kDefaultWindow = 200;

/**
 * Convergence statistics of one node's records.
 *
 * Delta and collision figures cover the records from the settling cycle on,
 * or the trailing window when the run never settles. A window longer than
 * the record list is shortened to fit.
 *
 * Throws std::invalid_argument for an empty list, a zero window or records
 * from more than one node.
 */
ConvergenceReport analyze(std::span<const CycleRecord> records,
                          const TheoryPrediction& prediction, Seconds tolerance,
                          std::size_t window = kDefaultWindow);

/// Standard deviation of the offset around its asymptote when the loop is
/// stable, otherwise of the per-cycle innovation alone.
Seconds stationary_offset_std(const NodeConfig& node);

/// Band used when none is configured: six stationary standard deviations,
/// plus two ticks in tick mode, plus 1 ns so noise-free runs can settle.
Seconds default_tolerance(const NodeConfig& node, Representation mode);

/// Prediction for a node using its mean delays.
TheoryPrediction predict_node(const NodeConfig& node);

struct NodeAnalysis {
  std::uint32_t node_id = 0;
  TheoryPrediction theory;
  ConvergenceReport report;
};

/// analyze() for every node of a run. A missing tolerance means
/// default_tolerance() per node.
std::vector<NodeAnalysis> analyze_records(const ScenarioConfig& scenario,
                                          const std::vector<CycleRecord>& records,
                                          std::optional<Seconds> tolerance,
                                          std::size_t window = kDefaultWindow);

/// Sets the gain on every node; a derived feedforward follows the new gain.
ScenarioConfig with_alpha(const ScenarioConfig& scenario, double alpha);

struct AlphaSweepPoint {
  double alpha = 0.0;
  ConvergenceReport report;  ///< first node (lowest id) of the scenario
};

/// One run per gain, everything else (seed included) unchanged. Runs execute
/// concurrently; results are returned in input order.
std::vector<AlphaSweepPoint> sweep_alpha(const ScenarioConfig& base,
                                         std::span<const double> alphas,
                                         std::size_t window = kDefaultWindow);

}  // namespace pkco
