#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pkco/analysis.hpp"
#include "pkco/netsim.hpp"
#include "support.hpp"

namespace pkco {
namespace {

using namespace pkco::testing;

ScenarioConfig five_slots(bool master_in_domain) {
  ScenarioConfig s = single_node(0.5, kTestbedKappa, kTestbedEta, 0.0, 300, Representation::ticks);
  s.master_in_collision_domain = master_in_domain;
  NodeConfig proto = s.nodes.front();
  s.nodes.clear();
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> start(-0.3, 0.3);
  for (std::uint32_t i = 0; i < 5; ++i) {
    NodeConfig n = proto;
    n.node_id = i + 1;
    n.initial_offset = start(gen);
    enable_feedforward(n, i * 12.81e-3);
    s.nodes.push_back(n);
  }
  return s;
}

TEST(Netsim, DeltaMetric) {
  EXPECT_EQ(delta_metric(0.0, 0.0, 0.0), 0.0);
  EXPECT_NEAR(delta_metric(1.0, 9.15e-3, 0.99085), 0.0, 1e-15);
  EXPECT_NEAR(delta_metric(0.0, 0.0, -1.377e-3), 1.377e-3, 1e-18);
}

TEST(Netsim, NoiseFreeRunFollowsTheRecursion) {
  const ScenarioConfig s = single_node(0.5, kSimKappa, kSimEta, 0.6, 100);
  const RunResult r = run(s);
  ASSERT_EQ(r.records.size(), 100u);
  const auto oracle = iterate_recursion(0.5, kSimKappa, kSimEta, 0.0, 0.0,
                                        estimator_representative(0.6), 100);
  for (std::size_t c = 0; c < r.records.size(); ++c) {
    ASSERT_NEAR(r.records[c].offset_after, wrap_signed(oracle[c + 1], 1.0), 1e-12)
        << "cycle " << c;
  }
  EXPECT_NEAR(r.records.back().offset_after, -1.377e-3, 1e-12);
}

TEST(Netsim, RecordFieldsAreConsistent) {
  ScenarioConfig s = single_node(0.5, kSimKappa, kSimEta, 0.2, 50);
  enable_feedforward(s.nodes.front(), 9.15e-3);
  const RunResult r = run(s);
  double prev = 0.2;
  for (const CycleRecord& rec : r.records) {
    EXPECT_EQ(rec.kappa_sample, kSimKappa);
    EXPECT_EQ(rec.eta_sample, kSimEta);
    EXPECT_NEAR(rec.timestamp, wrap_phase(prev + kSimKappa, 1.0), 1e-12);
    EXPECT_NEAR(rec.offset_after, prev + rec.correction, 1e-12);
    EXPECT_NEAR(rec.fire_time_rel, -rec.offset_after, 1e-12);
    EXPECT_NEAR(rec.delta, rec.offset_after - 9.15e-3, 1e-12);
    prev = rec.offset_after;
  }
  EXPECT_NEAR(prev, 9.15e-3, 1e-12);
}

TEST(Netsim, NoiseFreeOffsetDoesNotDriftOverLongRuns) {
  const RunResult r = run(single_node(0.5, kTestbedKappa, kTestbedEta, 0.3, 100000));
  const double asymptote = -(kTestbedKappa + kTestbedEta / 0.5);
  for (std::size_t c = 100; c < r.records.size(); c += 997) {
    ASSERT_NEAR(r.records[c].offset_after, asymptote, 1e-15) << c;
  }
  EXPECT_NEAR(r.records.back().offset_after, asymptote, 1e-15);
}

TEST(Netsim, FeedforwardReachesEverySlot) {
  for (const double slot : {0.0, 9.15e-3, 12.81e-3, 0.4}) {
    ScenarioConfig s = single_node(0.5, kSimKappa, kSimEta, -0.3, 80);
    enable_feedforward(s.nodes.front(), slot);
    const RunResult r = run(s);
    EXPECT_NEAR(r.records.back().offset_after, wrap_signed(slot, 1.0), 1e-12);
    EXPECT_NEAR(r.records.back().delta, 0.0, 1e-12);
  }
}

TEST(Netsim, TickModeStaysWithinTwoTicks) {
  ScenarioConfig s = single_node(0.5, kTestbedKappa, kTestbedEta, 0.137, 300, Representation::ticks);
  enable_feedforward(s.nodes.front(), 12.81e-3);
  const RunResult r = run(s);
  for (std::size_t c = 100; c < r.records.size(); ++c) {
    ASSERT_LT(std::abs(r.records[c].delta), 2.0 * kTick) << c;
  }
}

TEST(Netsim, TickModeWithoutCompensationApproachesAsymptote) {
  const ScenarioConfig s = single_node(0.5, kTestbedKappa, kTestbedEta, 0.02, 200, Representation::ticks);
  const RunResult r = run(s);
  const double asymptote = -(kTestbedKappa + kTestbedEta / 0.5);
  for (std::size_t c = 100; c < r.records.size(); ++c) {
    ASSERT_LT(std::abs(r.records[c].delta - asymptote), 2.0 * kTick);
  }
}

TEST(Netsim, DelaysFillingTheCycleAreRejected) {
  const ScenarioConfig s = single_node(0.5, 0.6, 0.5, 0.0, 10);
  try {
    run(s);
    FAIL() << "expected SimulationError";
  } catch (const SimulationError& e) {
    EXPECT_EQ(e.cycle(), 0u);
    EXPECT_EQ(e.node_id(), 1u);
  }
}

TEST(Netsim, CollisionsWithTheMasterOnlyHitSlotZero) {
  const RunResult r = run(five_slots(true));
  for (const CycleRecord& rec : r.records) {
    if (rec.cycle < 100) continue;
    EXPECT_EQ(rec.collided, rec.node_id == 1) << rec.node_id << " at " << rec.cycle;
  }
}

TEST(Netsim, DistinctSlotsAvoidCollisions) {
  const RunResult r = run(five_slots(false));
  for (const auto& a : analyze_records(r.scenario, r.records, std::nullopt)) {
    EXPECT_TRUE(a.report.converged);
    EXPECT_EQ(a.report.collision_count, 0u) << a.node_id;
  }
}

TEST(Netsim, SharedSlotCollides) {
  ScenarioConfig s = five_slots(false);
  enable_feedforward(s.nodes[3], s.nodes[2].controller.slot_reference);
  const RunResult r = run(s);
  for (const CycleRecord& rec : r.records) {
    if (rec.cycle < 100) continue;
    EXPECT_EQ(rec.collided, rec.node_id == 3 || rec.node_id == 4);
  }
}

TEST(Netsim, ZeroGuardDisablesCollisionDetection) {
  ScenarioConfig s = five_slots(true);
  s.guard_window = 0.0;
  for (const CycleRecord& rec : run(s).records) EXPECT_FALSE(rec.collided);
}

ScenarioConfig noisy(std::uint64_t seed) {
  ScenarioConfig s = single_node(0.5, kSimKappa, kSimEta, 0.1, 400);
  s.seed = seed;
  for (NodeConfig& n : s.nodes) {
    n.clock.offset_noise_variance = kSimNoiseVariance;
    n.kappa.variance = 1e-11;
    n.eta.variance = 1e-11;
  }
  NodeConfig second = s.nodes.front();
  second.node_id = 2;
  second.initial_offset = -0.2;
  s.nodes.push_back(second);
  return s;
}

TEST(Netsim, SameSeedSameTrace) {
  EXPECT_EQ(run(noisy(5)).records, run(noisy(5)).records);
  EXPECT_NE(run(noisy(5)).records, run(noisy(6)).records);
}

TEST(Netsim, NodeOrderDoesNotMatter) {
  ScenarioConfig a = noisy(9);
  ScenarioConfig b = a;
  std::reverse(b.nodes.begin(), b.nodes.end());
  EXPECT_EQ(run(a).records, run(b).records);
}

TEST(Netsim, NodesDrawFromTheirOwnStreams) {
  ScenarioConfig both = noisy(13);
  both.guard_window = 0.0;
  ScenarioConfig alone = both;
  alone.nodes.pop_back();
  EXPECT_EQ(records_for_node(run(both).records, 1), run(alone).records);
}

TEST(Netsim, ContinuationMatchesOneLongRun) {
  const ScenarioConfig full = noisy(21);
  ScenarioConfig head = full;
  head.num_cycles = 150;
  ScenarioConfig rest = full;
  rest.num_cycles = full.num_cycles - head.num_cycles;
  const RunResult first = run(head);
  const RunResult second = run(rest, first.final_nodes, head.num_cycles);
  std::vector<CycleRecord> joined = first.records;
  joined.insert(joined.end(), second.records.begin(), second.records.end());
  EXPECT_EQ(joined, run(full).records);
}

TEST(Netsim, RecordsAreOrderedByCycleThenNode) {
  const RunResult r = run(noisy(2));
  ASSERT_EQ(r.records.size(), 800u);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    EXPECT_EQ(r.records[i].cycle, i / 2);
    EXPECT_EQ(r.records[i].node_id, i % 2 + 1);
  }
}

TEST(Netsim, Validation) {
  ScenarioConfig s = single_node(0.5, kSimKappa, kSimEta, 0.0, 10);
  EXPECT_NO_THROW(s.validate());

  ScenarioConfig bad = s;
  bad.nodes.push_back(bad.nodes.front());
  EXPECT_THROW(bad.validate(), std::invalid_argument);

  bad = s;
  bad.nodes.front().controller.slot_reference = 1.0;
  try {
    bad.validate();
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("node.1.controller.slot_reference"), std::string::npos);
  }

  bad = s;
  bad.num_cycles = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);

  bad = s;
  bad.nodes.clear();
  EXPECT_THROW(bad.validate(), std::invalid_argument);

  bad = s;
  bad.cycle_period = 2.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Netsim, UnstableGainWarns) {
  ScenarioConfig s = single_node(2.1, kSimKappa, kSimEta, 0.0, 10);
  ASSERT_EQ(s.warnings().size(), 1u);
  EXPECT_NE(s.warnings().front().find("node.1.controller.alpha"), std::string::npos);
  EXPECT_TRUE(single_node(0.5, 0, 0, 0, 1).warnings().empty());
}

// Noise-only loop: the trailing mean sits on the asymptote within three
// standard errors of an AR(1) mean, and the spread matches the stationary
// standard deviation.
TEST(NetsimProperty, StochasticSteadyStateMatchesTheory) {
  ScenarioConfig s = single_node(0.5, kSimKappa, kSimEta, 0.05, 1200);
  s.seed = 1234;
  s.nodes.front().clock.offset_noise_variance = kSimNoiseVariance;
  const RunResult r = run(s);
  const NodeConfig& n = r.scenario.nodes.front();
  const ConvergenceReport rep = analyze(r.records, predict_node(n), default_tolerance(n, s.mode));
  const double sigma = std::sqrt(kSimNoiseVariance);
  EXPECT_TRUE(rep.converged);
  EXPECT_LT(rep.abs_error_vs_theory, 3.0 * sigma / (0.5 * std::sqrt(200.0)));
  EXPECT_NEAR(rep.steady_std / stationary_offset_std(n), 1.0, 0.2);
}

}  // namespace
}  // namespace pkco
