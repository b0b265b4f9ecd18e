#include "pkco/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

namespace pkco {

namespace {

bool inside_band(Seconds offset, Seconds asymptote, Seconds tolerance) {
  return std::abs(offset - asymptote) < tolerance;
}

}  // namespace

ConvergenceReport analyze(std::span<const CycleRecord> records,
                          const TheoryPrediction& prediction, Seconds tolerance,
                          std::size_t window) {
  if (records.empty()) throw std::invalid_argument("analyze: no records");
  if (window == 0) throw std::invalid_argument("analyze: window must be >= 1");
  const std::uint32_t node = records.front().node_id;
  for (const CycleRecord& r : records) {
    if (r.node_id != node) {
      throw std::invalid_argument("analyze: records span several nodes");
    }
  }

  ConvergenceReport rep;
  rep.theory_asymptote = prediction.asymptote;

  // Scan backwards for the last record outside the band.
  std::size_t first_settled = records.size();
  while (first_settled > 0 &&
         inside_band(records[first_settled - 1].offset_after, prediction.asymptote,
                     tolerance)) {
    --first_settled;
  }
  rep.converged = first_settled < records.size();
  if (rep.converged) rep.settling_cycle = records[first_settled].cycle;

  const std::size_t n = std::min(window, records.size());
  const auto tail = records.last(n);
  double sum = 0.0;
  for (const CycleRecord& r : tail) sum += r.offset_after;
  rep.steady_mean = sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (const CycleRecord& r : tail) {
      const double d = r.offset_after - rep.steady_mean;
      ss += d * d;
    }
    rep.steady_std = std::sqrt(ss / static_cast<double>(n - 1));
  }
  rep.abs_error_vs_theory = std::abs(rep.steady_mean - rep.theory_asymptote);

  const auto post = rep.converged ? records.subspan(first_settled) : tail;
  for (const CycleRecord& r : post) {
    rep.max_abs_delta = std::max(rep.max_abs_delta, std::abs(r.delta));
    if (r.collided) ++rep.collision_count;
  }
  return rep;
}

Seconds stationary_offset_std(const NodeConfig& node) {
  const double alpha = node.controller.alpha;
  const double innovation = node.clock.offset_noise_variance +
                            alpha * alpha * node.kappa.variance + node.eta.variance;
  if (!is_stable_gain(alpha)) return std::sqrt(innovation);
  const double pole = 1.0 - alpha;
  return std::sqrt(innovation / (1.0 - pole * pole));
}

Seconds default_tolerance(const NodeConfig& node, Representation mode) {
  Seconds tol = 6.0 * stationary_offset_std(node) + 1e-9;
  if (mode == Representation::ticks) tol += 2.0 * node.clock.tick_period;
  return tol;
}

TheoryPrediction predict_node(const NodeConfig& node) {
  return predict(node.controller, node.kappa.mean, node.eta.mean);
}

std::vector<NodeAnalysis> analyze_records(const ScenarioConfig& scenario,
                                          const std::vector<CycleRecord>& records,
                                          std::optional<Seconds> tolerance,
                                          std::size_t window) {
  std::vector<NodeAnalysis> out;
  for (const NodeConfig& node : scenario.nodes) {
    NodeAnalysis a;
    a.node_id = node.node_id;
    a.theory = predict_node(node);
    const std::vector<CycleRecord> mine = records_for_node(records, node.node_id);
    if (mine.empty()) {
      throw std::invalid_argument("no records for node " +
                                  std::to_string(node.node_id));
    }
    a.report = analyze(mine, a.theory,
                       tolerance.value_or(default_tolerance(node, scenario.mode)),
                       window);
    out.push_back(a);
  }
  return out;
}

ScenarioConfig with_alpha(const ScenarioConfig& scenario, double alpha) {
  ScenarioConfig s = scenario;
  for (NodeConfig& n : s.nodes) {
    n.controller.alpha = alpha;
    if (n.controller.feedforward_enabled && !n.controller.feedforward_fixed) {
      n.controller.feedforward = feedforward_term(alpha, n.kappa.mean, n.eta.mean);
    }
  }
  return s;
}

std::vector<AlphaSweepPoint> sweep_alpha(const ScenarioConfig& base,
                                         std::span<const double> alphas,
                                         std::size_t window) {
  std::vector<std::future<AlphaSweepPoint>> jobs;
  jobs.reserve(alphas.size());
  for (const double alpha : alphas) {
    jobs.push_back(std::async(std::launch::async, [&base, alpha, window] {
      const RunResult result = run(with_alpha(base, alpha));
      const NodeConfig& node = result.scenario.nodes.front();
      const std::vector<CycleRecord> mine =
          records_for_node(result.records, node.node_id);
      return AlphaSweepPoint{
          alpha, analyze(mine, predict_node(node),
                         default_tolerance(node, result.scenario.mode), window)};
    }));
  }
  std::vector<AlphaSweepPoint> out;
  out.reserve(jobs.size());
  for (auto& job : jobs) out.push_back(job.get());
  return out;
}

}  // namespace pkco
