// Copyright 2026 The Kinoplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <vector>

#include "kinoplan/benchmark.hpp"
#include "kinoplan/search.hpp"
#include "oracles.hpp"
#include "search_instances.hpp"

namespace kinoplan {
namespace {

PlannerConfig small_config(int order) {
  PlannerConfig cfg;
  cfg.order = order;
  cfg.axes = PlanAxes::k2D;
  cfg.tau = 0.2;
  cfg.u_max = order == 1 ? 2.0 : (order == 2 ? kGravity : 5.0 * kGravity);
  cfg.du = cfg.u_max / 2.0;
  cfg.v_max = Vec3::Constant(2.0);
  cfg.a_max = Vec3::Constant(kGravity);
  cfg.j_max = Vec3::Constant(5.0 * kGravity);
  cfg.quantum = lattice_quantum(cfg);
  cfg.goal_tol = {0.3, 0.5, 0.5};
  return cfg;
}

TEST(Plan, StartInsideGoalRegion) {
  const PlanResult r = plan(FlatState(Vec3(0.1, 0, 0)), PartialGoal(Vec3::Zero()), PointCloudMap(), small_config(3));
  EXPECT_TRUE(r.controls.empty());
  EXPECT_EQ(r.stats.total_cost, 0.0);
  EXPECT_EQ(r.stats.expanded, 0u);
}

TEST(Plan, MatchesExhaustiveEnumeration) {
  oracle::Rng rng(81);
  int solved = 0;
  while (solved < 50) {
    const auto in = oracle::small_instance(rng);
    if (!in) continue;
    ++solved;
    const PlanResult r = plan(in->start, in->goal, in->map, in->cfg);
    ASSERT_EQ(r.stats.total_cost, *in->best.cost) << "instance " << solved << " order " << in->cfg.order;
    ASSERT_TRUE(revalidate(r, in->map, in->cfg));
  }
}

TEST(Plan, ResultInvariants) {
  oracle::Rng rng(82);
  for (int n = 0; n < 20; ++n) {
    const auto in = oracle::small_instance(rng);
    if (!in) continue;
    const PlanResult r = plan(in->start, in->goal, in->map, in->cfg);
    double cost = 0.0;
    for (const Vec3& u : r.controls) cost += (u.squaredNorm() + in->cfg.rho) * in->cfg.tau;
    EXPECT_NEAR(r.stats.total_cost, cost, 1e-9 * cost);
    EXPECT_NEAR(r.stats.T, in->cfg.tau * static_cast<double>(r.controls.size()), 1e-12);
    EXPECT_TRUE(in_goal_region(r.trajectory.knot(r.trajectory.size()), in->goal, in->cfg.goal_tol, in->cfg.order));
  }
}

TEST(Plan, LqmtHeuristicMatchesZeroHeuristicWithFewerExpansions) {
  for (const BenchmarkCase& c : benchmark_corpus()) {
    const Scenario sc = benchmark_scenario(c);
    const PlannerConfig cfg = benchmark_config(sc.config, 1);
    const PlanResult lq = plan(sc.start, sc.goal, sc.map, cfg);
    const PlanResult zero = plan(sc.start, sc.goal, sc.map, cfg, zero_heuristic());
    // equal-cost optimal sequences may sum in a different order
    EXPECT_NEAR(lq.stats.total_cost, zero.stats.total_cost, 1e-12 * zero.stats.total_cost) << c.name;
    EXPECT_LE(lq.stats.expanded, zero.stats.expanded) << c.name;
  }
  const PlannerConfig cfg = small_config(3);
  const PartialGoal goal(Vec3(1.5, 0.5, 0));
  const PlanResult lq = plan(FlatState(), goal, PointCloudMap(), cfg);
  const PlanResult zero = plan(FlatState(), goal, PointCloudMap(), cfg, zero_heuristic());
  EXPECT_NEAR(lq.stats.total_cost, zero.stats.total_cost, 1e-12 * zero.stats.total_cost);
  EXPECT_LE(lq.stats.expanded, zero.stats.expanded);
}

TEST(Plan, LargerRhoNeverSlowsTheTrajectory) {
  for (const BenchmarkCase& c : benchmark_corpus()) {
    const Scenario sc = benchmark_scenario(c);
    double prev_T = 1e300;
    for (double rho : {1e2, 1e3, 1e4}) {
      PlannerConfig cfg = benchmark_config(sc.config, 1);
      cfg.rho = rho;
      const PlanResult r = plan(sc.start, sc.goal, sc.map, cfg);
      EXPECT_LE(r.stats.T, prev_T + 1e-12) << c.name << " rho " << rho;
      prev_T = r.stats.T;
    }
  }
  double prev_T = 1e300;
  for (double rho : {1e2, 1e3, 1e4}) {
    PlannerConfig cfg = small_config(3);
    cfg.rho = rho;
    const PlanResult r = plan(FlatState(), PartialGoal(Vec3(1.5, 0.5, 0)), PointCloudMap(), cfg);
    EXPECT_LE(r.stats.T, prev_T + 1e-12) << "rho " << rho;
    prev_T = r.stats.T;
  }
}

TEST(Plan, Deterministic) {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kRandomClutter;
  spec.obstacles = 6;
  spec.seed = 3;
  const Scenario sc = generate(spec);
  const PlannerConfig cfg = benchmark_config(sc.config, 2);
  const PlanResult a = plan(sc.start, sc.goal, sc.map, cfg);
  const PlanResult b = plan(sc.start, sc.goal, sc.map, cfg);
  EXPECT_EQ(a.controls, b.controls);
  EXPECT_EQ(a.stats.expanded, b.stats.expanded);
  EXPECT_EQ(a.stats.generated, b.stats.generated);
  EXPECT_EQ(a.stats.total_cost, b.stats.total_cost);
}

TEST(Plan, StartInfeasible) {
  const PlannerConfig cfg = small_config(3);
  auto expect_kind = [&](const FlatState& s, const PointCloudMap& map) {
    try {
      plan(s, PartialGoal(Vec3(2, 0, 0)), map, cfg);
      FAIL() << "expected StartInfeasible";
    } catch (const PlanningError& e) {
      EXPECT_EQ(e.kind(), PlanFailure::kStartInfeasible);
    }
  };
  expect_kind(FlatState(Vec3::Zero(), Vec3(3, 0, 0), Vec3::Zero()), PointCloudMap());
  expect_kind(FlatState(Vec3::Zero(), Vec3::Zero(), Vec3(0, 0, -kGravity)), PointCloudMap());
  expect_kind(FlatState(), PointCloudMap({Vec3(0.1, 0, 0)}));
}

TEST(Plan, NoPathWhenSealed) {
  ScenarioSpec spec;
  spec.gap_width = 0.3;  // narrower than any roll allows in the plane
  const Scenario sc = generate(spec);
  PlannerConfig cfg = benchmark_config(sc.config, 1);
  try {
    plan(sc.start, sc.goal, sc.map, cfg);
    FAIL() << "expected NoPath";
  } catch (const PlanningError& e) {
    EXPECT_EQ(e.kind(), PlanFailure::kNoPath);
    EXPECT_GT(e.expanded(), 0u);
  }
}

TEST(Plan, BudgetExceededCarriesIncumbent) {
  PlannerConfig cfg = small_config(3);
  cfg.max_expansions = 5;
  try {
    plan(FlatState(), PartialGoal(Vec3(1.5, 0, 0)), PointCloudMap(), cfg);
    FAIL() << "expected BudgetExceeded";
  } catch (const PlanningError& e) {
    EXPECT_EQ(e.kind(), PlanFailure::kBudgetExceeded);
    ASSERT_TRUE(e.incumbent().has_value());
    EXPECT_GE(e.incumbent()->f, e.incumbent()->g);
    EXPECT_EQ(e.expanded(), 5u);
  }
}

TEST(Plan, InflatedHeuristicIsLabelledNonOptimal) {
  PlannerConfig cfg = small_config(3);
  EXPECT_TRUE(plan(FlatState(), PartialGoal(Vec3(1, 0, 0)), PointCloudMap(), cfg).stats.optimal);
  cfg.heuristic_weight = 2.0;
  const PlanResult r = plan(FlatState(), PartialGoal(Vec3(1, 0, 0)), PointCloudMap(), cfg);
  EXPECT_FALSE(r.stats.optimal);
  EXPECT_EQ(r.stats.heuristic_weight, 2.0);
}

TEST(Plan, WideBodyTiltsThroughNarrowDoor) {
  ScenarioSpec spec;
  spec.robot = {0.5, 0.1};
  spec.gap_width = 0.9;  // narrower than the 1.0 m body diameter
  const Scenario sc = generate(spec);
  const PlanResult r = plan(sc.start, sc.goal, sc.map, sc.config);
  EXPECT_TRUE(revalidate(r, sc.map, sc.config));
  EXPECT_GT(oracle::degrees(oracle::max_roll(r.trajectory, 0.0, kGravity)), 0.0);
  // a sphere of radius r could not fit
  EXPECT_LT(spec.gap_width, 2.0 * spec.robot.r);
}

TEST(Revalidate, EmittedPlansPass) {
  oracle::Rng rng(83);
  for (int n = 0; n < 20; ++n) {
    const auto in = oracle::small_instance(rng);
    if (!in) continue;
    const PlanResult r = plan(in->start, in->goal, in->map, in->cfg);
    EXPECT_TRUE(revalidate(r, in->map, in->cfg));
  }
}

TEST(Revalidate, TeleportedSegmentIsADiscontinuity) {
  const PlannerConfig cfg = small_config(3);
  const PlanResult r = plan(FlatState(), PartialGoal(Vec3(1.5, 0, 0)), PointCloudMap(), cfg);
  ASSERT_GE(r.trajectory.size(), 3u);
  std::vector<MotionPrimitive> segs = r.trajectory.segments();
  const MotionPrimitive& s = segs[1];
  segs[1] = MotionPrimitive(FlatState(s.s0.p + Vec3(0, 0.5, 0), s.s0.v, s.s0.a), s.u, s.tau, cfg.rho, s.order);
  const ValidationReport rep = revalidate(Trajectory(segs, cfg.order, cfg.rho), PointCloudMap(), cfg);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.segment, 1);
  EXPECT_NE(rep.violation.find("discontinuity"), std::string::npos);
}

TEST(Revalidate, RestoredObstacleIsACollision) {
  const PlannerConfig cfg = small_config(3);
  const PlanResult r = plan(FlatState(), PartialGoal(Vec3(1.5, 0, 0)), PointCloudMap(), cfg);
  const Vec3 mid = r.trajectory.sample(r.stats.T / 2.0).state.p;
  const ValidationReport rep = revalidate(r, PointCloudMap({mid}), cfg);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.violation, "collision");
}

TEST(Revalidate, BoundViolationIsReported) {
  PlannerConfig cfg = small_config(3);
  const PlanResult r = plan(FlatState(), PartialGoal(Vec3(1.5, 0, 0)), PointCloudMap(), cfg);
  cfg.v_max = Vec3::Constant(0.1);
  const ValidationReport rep = revalidate(r, PointCloudMap(), cfg);
  EXPECT_FALSE(rep.ok);
  EXPECT_NE(rep.violation.find("velocity"), std::string::npos);
}

}  // namespace
}  // namespace kinoplan
