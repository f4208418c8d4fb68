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

#include <cmath>
#include <vector>

#include "kinoplan/primitive.hpp"
#include "oracles.hpp"

namespace kinoplan {
namespace {

TEST(Propagate, UnitCubic) {
  const FlatState s = propagate(FlatState(), Vec3(6, 0, 0), 1.0);
  EXPECT_EQ(s.p, Vec3(1, 0, 0));
  EXPECT_EQ(s.v, Vec3(3, 0, 0));
  EXPECT_EQ(s.a, Vec3(6, 0, 0));
}

TEST(Propagate, ConstantVelocity) {
  const FlatState s0(Vec3::Zero(), Vec3(1, 0, 0), Vec3::Zero());
  EXPECT_EQ(propagate(s0, Vec3::Zero(), 2.0).p, Vec3(2, 0, 0));
}

TEST(Propagate, MatchesNumericIntegrationForEveryOrder) {
  oracle::Rng rng(31);
  for (int order = 1; order <= 3; ++order) {
    for (int n = 0; n < 200; ++n) {
      const FlatState s0 = FlatState(rng.vec(-5, 5), rng.vec(-3, 3), rng.vec(-5, 5)).truncated(order);
      const Vec3 u = rng.vec(-50, 50);
      const double t = rng.uniform(0.0, 0.5);
      const FlatState exact = propagate(s0, u, t, order);
      const FlatState num = oracle::rk4_integrate(s0, u, t, order);
      for (int k = 0; k < 3; ++k)
        ASSERT_LT((exact[k] - num[k]).cwiseAbs().maxCoeff(), 1e-9) << "order " << order;
    }
  }
}

TEST(Propagate, RejectsBadOrder) {
  EXPECT_THROW(propagate(FlatState(), Vec3::Zero(), 1.0, 4), ConfigError);
}

TEST(PrimitiveCost, Examples) {
  EXPECT_DOUBLE_EQ(primitive_cost(Vec3::Zero(), 10000.0, 0.2), 2000.0);
  EXPECT_DOUBLE_EQ(primitive_cost(Vec3(50, 0, 0), 10000.0, 0.2), 2500.0);
  EXPECT_DOUBLE_EQ(primitive_cost(Vec3::Zero(), 0.0, 0.2), 0.0);
}

TEST(MotionPrimitive, CostAndEndState) {
  const MotionPrimitive m(FlatState(Vec3(1, 2, 3), Vec3(0.5, 0, 0), Vec3(0, 1, 0)), Vec3(3, -4, 0),
                          0.2, 100.0);
  EXPECT_EQ(m.cost, (25.0 + 100.0) * 0.2);
  EXPECT_EQ(m.end(), m.eval(0.2));
  EXPECT_DOUBLE_EQ(m.effort(), 25.0 * 0.2);
  EXPECT_EQ(m.jerk(), Vec3(3, -4, 0));
  const std::vector<double> d = m.coefficients(0);
  ASSERT_EQ(d.size(), 4u);
  EXPECT_EQ(d[0], 1.0);
  EXPECT_EQ(d[1], 0.5);
  EXPECT_EQ(d[2], 0.0);
  EXPECT_EQ(d[3], 3.0);
}

TEST(MotionPrimitive, LowerOrdersTruncateTheStart) {
  const MotionPrimitive m(FlatState(Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3(3, 0, 0)), Vec3(1, 0, 0),
                          0.5, 1.0, 1);
  EXPECT_EQ(m.s0.v, Vec3::Zero());
  EXPECT_EQ(m.end().p, Vec3(1.5, 0, 0));
  EXPECT_EQ(m.jerk(), Vec3::Zero());
  EXPECT_EQ(m.coefficients(0).size(), 2u);
}

TEST(ControlSet, SizesAndGrid) {
  EXPECT_EQ(ControlSet::grid(1.0, 1.0, PlanAxes::k2D, 0.2).size(), 9u);
  EXPECT_EQ(ControlSet::grid(2.0, 1.0, PlanAxes::k2D, 0.2).size(), 25u);
  EXPECT_EQ(ControlSet::grid(1.0, 1.0, PlanAxes::k3D, 0.2).size(), 27u);
  const ControlSet set = ControlSet::grid(50.0, 12.5, PlanAxes::k2D, 0.2);
  EXPECT_EQ(set.size(), 81u);
  std::vector<double> xs;
  for (const Vec3& u : set.inputs)
    if (u.y() == -50.0) xs.push_back(u.x());
  EXPECT_EQ(xs, (std::vector<double>{-50, -37.5, -25, -12.5, 0, 12.5, 25, 37.5, 50}));
  for (const Vec3& u : set.inputs) EXPECT_EQ(u.z(), 0.0);
}

TEST(ControlSet, LexicographicOrder) {
  const ControlSet set = ControlSet::grid(1.0, 1.0, PlanAxes::k3D, 0.2);
  for (std::size_t i = 1; i < set.size(); ++i) {
    const Vec3& a = set.inputs[i - 1];
    const Vec3& b = set.inputs[i];
    EXPECT_TRUE(std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3));
  }
}

TEST(ControlSet, SizeFormula) {
  for (int half = 1; half <= 4; ++half) {
    const auto n = static_cast<std::size_t>(2 * half + 1);
    EXPECT_EQ(ControlSet::grid(half * 2.5, 2.5, PlanAxes::k2D, 0.1).size(), n * n);
    EXPECT_EQ(ControlSet::grid(half * 2.5, 2.5, PlanAxes::k3D, 0.1).size(), n * n * n);
  }
}

TEST(ControlSet, RejectsNonIntegralRatio) {
  EXPECT_THROW(ControlSet::grid(50.0, 15.0, PlanAxes::k2D, 0.2), ConfigError);
  EXPECT_THROW(ControlSet::grid(1.0, 2.0, PlanAxes::k2D, 0.2), ConfigError);
}

TEST(Expand, OnePrimitivePerInputInOrder) {
  const ControlSet set = ControlSet::grid(1.0, 1.0, PlanAxes::k2D, 0.2);
  const auto prims = expand(FlatState(), set, 1.0);
  ASSERT_EQ(prims.size(), 9u);
  for (std::size_t i = 0; i < prims.size(); ++i) EXPECT_EQ(prims[i].u, set.inputs[i]);
  FlatState bad;
  bad.p.x() = std::nan("");
  EXPECT_THROW(expand(bad, set, 1.0), NonFiniteError);
}

TEST(Trajectory, StationarySegment) {
  const std::vector<Vec3> u = {Vec3::Zero()};
  const Trajectory t = trajectory_from_controls(FlatState(), u, 0.2, 10.0);
  EXPECT_EQ(t.effort(), 0.0);
  EXPECT_EQ(t.sample(0.1).state, FlatState());
}

TEST(Trajectory, KnotContinuityAndTotals) {
  oracle::Rng rng(32);
  const ControlSet set = ControlSet::grid(50.0, 12.5, PlanAxes::k3D, 0.2);
  for (int n = 0; n < 50; ++n) {
    std::vector<Vec3> us;
    const int N = rng.integer(1, 12);
    for (int k = 0; k < N; ++k) us.push_back(set.inputs[rng.integer(0, set.size() - 1)]);
    const FlatState s0(rng.vec(-1, 1), rng.vec(-1, 1), rng.vec(-1, 1));
    const Trajectory t = trajectory_from_controls(s0, us, 0.2, 1e4);
    ASSERT_EQ(t.size(), static_cast<std::size_t>(N));
    EXPECT_NEAR(t.duration(), 0.2 * N, 1e-12);
    double J = 0.0, C = 0.0;
    for (const Vec3& u : us) {
      J += u.squaredNorm() * 0.2;
      C += (u.squaredNorm() + 1e4) * 0.2;
    }
    EXPECT_NEAR(t.effort(), J, 1e-9 * J + 1e-12);
    EXPECT_NEAR(t.total_cost(), C, 1e-9 * C);
    for (std::size_t k = 1; k < t.size(); ++k) {
      const FlatState end = t.segments()[k - 1].eval(0.2);
      const FlatState start = t.segments()[k].s0;
      for (int d = 0; d < 3; ++d) EXPECT_LT((end[d] - start[d]).cwiseAbs().maxCoeff(), 1e-12);
    }
    EXPECT_EQ(t.controls(), us);
  }
}

TEST(Trajectory, SamplingAndKnots) {
  const std::vector<Vec3> us = {Vec3(6, 0, 0), Vec3(-6, 0, 0)};
  const Trajectory t = trajectory_from_controls(FlatState(), us, 1.0, 0.0);
  EXPECT_EQ(t.knot(0), FlatState());
  EXPECT_EQ(t.knot(1), t.segments()[1].s0);
  EXPECT_EQ(t.knot(2), t.segments()[1].end());
  EXPECT_EQ(t.sample(1.0).state, t.knot(1));
  EXPECT_EQ(t.sample(5.0).state, t.knot(2));  // clamped
  EXPECT_EQ(t.sample(-1.0).state, FlatState());
  EXPECT_EQ(t.sample(1.5).jerk, Vec3(-6, 0, 0));
}

TEST(Trajectory, EmptyKeepsStart) {
  const FlatState s0(Vec3(1, 2, 3));
  const Trajectory t = trajectory_from_controls(s0, {}, 0.2, 1.0);
  EXPECT_TRUE(t.empty());
  EXPECT_EQ(t.duration(), 0.0);
  EXPECT_EQ(t.knot(0), s0);
  EXPECT_EQ(t.sample(0.0).state, s0);
}

TEST(LatticeQuantum, ReachableStatesSitOnTheLattice) {
  oracle::Rng rng(33);
  for (int order = 1; order <= 3; ++order) {
    PlannerConfig cfg;
    cfg.order = order;
    cfg.u_max = 4.0;
    cfg.du = 1.0;
    cfg.tau = 0.2;
    const StateQuantum q = lattice_quantum(cfg);
    const ControlSet set = ControlSet::from_config(cfg);
    for (int n = 0; n < 100; ++n) {
      FlatState s;
      for (int k = 0; k < 8; ++k) s = propagate(s, set.inputs[rng.integer(0, set.size() - 1)], 0.2, order).truncated(order);
      const FlatState c = cell_center(quantize(s, q, order), q).truncated(order);
      for (int d = 0; d < order; ++d) ASSERT_LT((c[d] - s[d]).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

}  // namespace
}  // namespace kinoplan
