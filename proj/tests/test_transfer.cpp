#include <gtest/gtest.h>

#include <random>

#include "minrate/generator.hpp"
#include "minrate/transfer.hpp"
#include "support.hpp"

using namespace minrate;
using namespace minrate::testing;

namespace {

// Three unit intervals at R = 1, everything at speed 1. Job 1 (window [0, 2)) runs in
// I1 and shares I2 with job 2 (window [1, 3)), which also fills I3.
Instance relay_instance() {
  Instance in;
  in.profile = two_speed_profile();
  in.jobs = {{1, Rational(0), Rational(2), Q("3/2")}, {2, Rational(1), Rational(3), Q("3/2")}};
  return in;
}

WorkState relay_state(int level) {
  WorkState s;
  s.rate = 1;
  s.points = {Rational(1), Rational(2), Rational(3)};
  s.work = {{{1, 0}, Rational(1)}, {{1, 1}, Q("1/2")}, {{2, 1}, Q("1/2")}, {{2, 2}, Rational(1)}};
  s.levels.set(1, 0, level);
  s.levels.set(1, 1, level);
  s.levels.set(2, 1, level);
  s.levels.set(2, 2, level);
  return s;
}

EpsilonTransfer transfer(std::vector<std::size_t> iv, std::vector<int> jobs) { return {std::move(iv), std::move(jobs), false}; }

DistributionGraph graph_with(std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  DistributionGraph g;
  g.vertices = vertices;
  for (const auto& e : edges) g.edges[e] = transfer({e.first, e.second}, {1, 1});
  return g;
}

std::vector<WorkState> engine_states(const Instance& in) {
  std::vector<WorkState> out{initial_state(in)};
  EngineOptions o;
  o.observer = [&](const StepSnapshot& s) { out.push_back(state_of(in, s)); };
  solve(in, o);
  return out;
}

}  // namespace

TEST(RelayState, IsConsistent) {
  const auto in = relay_instance();
  EXPECT_EQ(state_problem(in, relay_state(1)), std::nullopt);
}

TEST(EnumerateTransfers, TwoHopRelay) {
  const auto in = relay_instance();
  const auto state = relay_state(1);
  TransferContext ctx{in, state, {}, SlrMode::Pointwise};
  const auto from_last = enumerate_transfers(ctx, 2);
  ASSERT_EQ(from_last.size(), 2u);
  EXPECT_EQ(from_last[0].intervals, (std::vector<std::size_t>{2, 1, 0}));
  EXPECT_EQ(from_last[0].jobs, (std::vector<int>{2, 2, 1}));
  EXPECT_EQ(from_last[1].intervals, (std::vector<std::size_t>{2, 1}));
  // Intermediate speeds stay put: the two jobs share I2's critical interval.
  EXPECT_EQ(transfer_problem(ctx, from_last[0]), std::nullopt);
  // Moving job 2 into I1 leaves its window.
  EXPECT_TRUE(transfer_problem(ctx, transfer({2, 0}, {2, 2})));
}

TEST(EnumerateTransfers, NoTransferForJobInsideOneInterval) {
  Instance in;
  in.profile = two_speed_profile();
  in.jobs = {{1, Rational(0), Rational(1), Rational(1)}, {2, Rational(1), Rational(2), Rational(1)}};
  WorkState s;
  s.rate = 1;
  s.points = {Rational(1), Rational(2)};
  s.work = {{{1, 0}, Rational(1)}, {{2, 1}, Rational(1)}};
  s.levels.set(1, 0, 1);
  s.levels.set(2, 1, 1);
  ASSERT_EQ(state_problem(in, s), std::nullopt);
  TransferContext ctx{in, s, {}, SlrMode::Pointwise};
  EXPECT_TRUE(enumerate_transfers(ctx, 0).empty());
  const auto g = build_graph(ctx);
  EXPECT_TRUE(g.edges.empty());
  EXPECT_TRUE(g.inactive.empty());
}

TEST(IsActive, LevelBoundaries) {
  const auto in = relay_instance();
  // Level 1 everywhere: the destination already runs at s_1, the top of its bracket.
  const auto low = relay_state(1);
  TransferContext a{in, low, {}, SlrMode::Pointwise};
  EXPECT_FALSE(is_active(a, transfer({2, 1}, {2, 2})));
  // Level 2 everywhere: the source sits at s_1, the bottom of its bracket.
  const auto high = relay_state(2);
  TransferContext b{in, high, {}, SlrMode::Pointwise};
  EXPECT_FALSE(is_active(b, transfer({2, 1}, {2, 2})));
}

TEST(IsActive, WorkedExampleAfterLevelRepair) {
  const auto in = worked_example();
  const auto states = engine_states(in);
  ASSERT_GE(states.size(), 2u);
  // Initially the single transfer exists but would break the level relation.
  TransferContext before{in, states[0], {}, SlrMode::Pointwise};
  const auto t0 = enumerate_transfers(before, 0);
  ASSERT_EQ(t0.size(), 1u);
  EXPECT_EQ(t0[0].intervals, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(t0[0].jobs, (std::vector<int>{1, 1}));
  EXPECT_FALSE(t0[0].active);
  // After the repair it is active and forms the graph's only edge.
  TransferContext after{in, states[1], {}, SlrMode::Pointwise};
  const auto g = build_graph(after);
  EXPECT_EQ(g.vertices, 2u);
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(g.edges.begin()->first, (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_TRUE(is_active(after, g.edges.begin()->second));
}

TEST(Priority, ClauseOneStepRightBeatsStepLeft) {
  Instance in;
  in.profile = two_speed_profile();
  for (int j = 1; j <= 4; ++j) in.jobs.push_back({j, Rational(0), Rational(j + 1), Rational(1)});
  const auto t1 = transfer({1, 2, 3}, {1, 1, 2});
  const auto t2 = transfer({1, 0, 3}, {1, 1, 3});
  const auto r = compare_priority(in, t1, t2);
  EXPECT_TRUE(r.first_higher);
  EXPECT_EQ(r.basis, PriorityBasis::Clause1);
  EXPECT_FALSE(compare_priority(in, t2, t1).first_higher);
}

TEST(Priority, ClauseThreeEarlierDeadline) {
  Instance in;
  in.profile = two_speed_profile();
  for (int j = 1; j <= 4; ++j) in.jobs.push_back({j, Rational(0), Rational(j + 1), Rational(1)});
  const auto t1 = transfer({0, 1, 2}, {1, 1, 2});
  const auto t2 = transfer({0, 1, 2}, {1, 1, 4});
  const auto r = compare_priority(in, t1, t2);
  EXPECT_TRUE(r.first_higher);
  EXPECT_EQ(r.basis, PriorityBasis::Clause3);
  EXPECT_FALSE(compare_priority(in, t2, t1).first_higher);
}

TEST(Priority, Errors) {
  const auto in = worked_example();
  const auto t = transfer({0, 1}, {1, 1});
  EXPECT_THROW(compare_priority(in, t, t), TransferError);
  EXPECT_THROW(compare_priority(in, t, transfer({1, 0}, {1, 1})), TransferError);
}

TEST(Priority, TotalAndAntisymmetric) {
  Instance in;
  in.profile = two_speed_profile();
  for (int j = 1; j <= 3; ++j) in.jobs.push_back({j, Rational(0), Rational(j + 1), Rational(1)});
  std::vector<EpsilonTransfer> all;
  for (std::size_t m : {1u, 2u})
    for (int j1 = 1; j1 <= 3; ++j1)
      for (int j2 = 1; j2 <= 3; ++j2) {
        if (j1 == j2) continue;
        all.push_back(transfer({0, m, 3}, {j1, j1, j2}));
      }
  all.push_back(transfer({0, 3}, {1, 1}));
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = 0; b < all.size(); ++b) {
      if (a == b) continue;
      EXPECT_NE(compare_priority(in, all[a], all[b]).first_higher, compare_priority(in, all[b], all[a]).first_higher);
    }
}

TEST(PathFinding, Chain) {
  const auto tree = path_finding(graph_with(3, {{0, 1}, {1, 2}}));
  EXPECT_EQ(tree.root, 2u);
  EXPECT_EQ(tree.edges, (std::vector<std::pair<std::size_t, std::size_t>>{{1, 2}, {0, 1}}));
  EXPECT_TRUE(tree.spans(3));
}

TEST(PathFinding, ShortestRightFirst) {
  const auto tree = path_finding(graph_with(3, {{0, 2}, {1, 2}, {2, 1}}));
  EXPECT_EQ(tree.edges, (std::vector<std::pair<std::size_t, std::size_t>>{{1, 2}, {0, 2}}));
}

TEST(PathFinding, LongestLeftWhenNoRight) {
  const auto tree = path_finding(graph_with(3, {{2, 0}, {1, 0}, {0, 2}}));
  // 0 joins by its right edge; then only left edges into {0, 2} remain.
  EXPECT_EQ(tree.edges, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 2}, {1, 0}}));
}

TEST(PathFinding, Edgeless) {
  const auto tree = path_finding(graph_with(2, {}));
  EXPECT_EQ(tree.reached, std::set<std::size_t>{1});
  EXPECT_FALSE(tree.spans(2));
}

TEST(EdgesCross, Cases) {
  EXPECT_TRUE(edges_cross({0, 2}, {1, 3}));
  EXPECT_FALSE(edges_cross({0, 3}, {1, 2}));
  EXPECT_FALSE(edges_cross({0, 1}, {1, 2}));
  EXPECT_FALSE(edges_cross({0, 1}, {2, 3}));
}

// Retained edges are active, trees are non-crossing, and graph construction is
// deterministic, on every state the engine passes through.
TEST(TransferProperty, EngineStates) {
  std::mt19937_64 rng(13);
  int graphs = 0;
  for (int i = 0; i < 40; ++i) {
    const Instance in = generate_instance(rng);
    for (const auto& state : engine_states(in)) {
      TransferContext ctx{in, state, {}, SlrMode::Pointwise};
      const auto g = build_graph(ctx);
      const auto again = build_graph(ctx);
      EXPECT_EQ(g.edges.size(), again.edges.size());
      for (const auto& [key, t] : g.edges) {
        EXPECT_TRUE(is_active(ctx, t));
        EXPECT_EQ(again.edges.at(key), t);
      }
      const auto tree = path_finding(g);
      for (std::size_t a = 0; a < tree.edges.size(); ++a)
        for (std::size_t b = a + 1; b < tree.edges.size(); ++b) EXPECT_FALSE(edges_cross(tree.edges[a], tree.edges[b]));
      ++graphs;
    }
  }
  EXPECT_GT(graphs, 40);
}

TEST(TransferProperty, BruteForceOnRelayAndWorkedExample) {
  const auto in = relay_instance();
  for (int level : {1, 2}) {
    const auto s = relay_state(level);
    EXPECT_EQ(brute_reach(in, s), engine_reach(in, s)) << level;
  }
  const auto ex = worked_example();
  for (const auto& s : engine_states(ex)) EXPECT_EQ(brute_reach(ex, s), engine_reach(ex, s));
}
