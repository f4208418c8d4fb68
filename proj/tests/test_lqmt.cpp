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

#include <algorithm>
#include <cmath>
#include <vector>

#include "kinoplan/lqmt.hpp"
#include "kinoplan/polynomial.hpp"
#include "oracles.hpp"

namespace kinoplan {
namespace {

FlatState random_state(oracle::Rng& rng, int order) {
  return FlatState(rng.vec(-3, 3), rng.vec(-2, 2), rng.vec(-3, 3)).truncated(order);
}

PartialGoal random_goal(oracle::Rng& rng, int defined) {
  const FlatState s(rng.vec(-3, 3), rng.vec(-2, 2), rng.vec(-3, 3));
  return PartialGoal::from_state(s, defined);
}

TEST(MinEffortBvp, MeetsBoundaryConditions) {
  oracle::Rng rng(61);
  for (int order = 1; order <= 3; ++order) {
    for (int m = 1; m <= order; ++m) {
      for (int n = 0; n < 200; ++n) {
        const FlatState s = random_state(rng, order);
        const PartialGoal goal = random_goal(rng, m);
        const double T = rng.uniform(0.2, 5.0);
        const MinEffortBvp bvp = solve_min_effort_bvp(s, goal, T, order);
        for (int j = 0; j < order; ++j)
          ASSERT_LT((bvp.derivative(j, 0.0) - s[j]).cwiseAbs().maxCoeff(), 1e-9);
        ASSERT_LT((bvp.derivative(0, T) - goal.p).cwiseAbs().maxCoeff(), 1e-7);
        if (m >= 2) {
          ASSERT_LT((bvp.derivative(1, T) - *goal.v).cwiseAbs().maxCoeff(), 1e-7);
        }
        if (m >= 3) {
          ASSERT_LT((bvp.derivative(2, T) - *goal.a).cwiseAbs().maxCoeff(), 1e-7);
        }
      }
    }
  }
}

TEST(MinEffortBvp, EffortMatchesQuadrature) {
  oracle::Rng rng(62);
  for (int order = 1; order <= 3; ++order) {
    for (int m = 1; m <= order; ++m) {
      for (int n = 0; n < 50; ++n) {
        const MinEffortBvp bvp = solve_min_effort_bvp(random_state(rng, order), random_goal(rng, m),
                                                      rng.uniform(0.3, 4.0), order);
        const double q = oracle::quadrature_cost(bvp, 0.0);
        ASSERT_NEAR(bvp.effort(), q, 1e-8 * std::max(1.0, q));
      }
    }
  }
}

TEST(MinEffortBvp, NoPerturbationLowersTheEffort) {
  // Among controls reaching the same defined terminal components, the solved
  // control is a minimum: adding a perturbation that leaves every boundary
  // value unchanged never helps.
  oracle::Rng rng(63);
  for (int n = 0; n < 200; ++n) {
    const int order = rng.integer(1, 3);
    const int m = rng.integer(1, order);
    const double T = rng.uniform(0.5, 3.0);
    const MinEffortBvp bvp = solve_min_effort_bvp(random_state(rng, order), random_goal(rng, m), T, order);
    // bump with zero integrals of order `order`: w(t) = d^order/dt^order of b(t),
    // b(t) = t^(order+1) (T - t)^(order+1), whose lower derivatives vanish at both ends
    auto bump_deriv = [&](double t) {
      const double h = 1e-3;
      auto b = [&](double x) { return std::pow(x, order + 1) * std::pow(T - x, order + 1); };
      if (order == 1) return (b(t + h) - b(t - h)) / (2 * h);
      if (order == 2) return (b(t + h) - 2 * b(t) + b(t - h)) / (h * h);
      return (b(t + 2 * h) - 2 * b(t + h) + 2 * b(t - h) - b(t - 2 * h)) / (2 * h * h * h);
    };
    const double eps = rng.uniform(-0.5, 0.5);
    const int axis = rng.integer(0, 2);
    const double perturbed = oracle::integrate(
        [&](double t) {
          Vec3 u = bvp.control(t);
          u[axis] += eps * bump_deriv(t);
          return u.squaredNorm();
        },
        0.0, T);
    ASSERT_GE(perturbed, bvp.effort() - 1e-6 * std::max(1.0, bvp.effort()));
  }
}

TEST(LqmtCost, DerivativeCoefficientsMatchNumericDerivative) {
  oracle::Rng rng(64);
  for (int order = 1; order <= 3; ++order) {
    for (int m = 1; m <= order; ++m) {
      for (int n = 0; n < 100; ++n) {
        const FlatState s = random_state(rng, order);
        const PartialGoal goal = random_goal(rng, m);
        const double rho = rng.uniform(0.1, 100.0);
        const std::vector<double> c = lqmt_cost_derivative(s, goal, rho, order);
        ASSERT_EQ(c.size(), static_cast<std::size_t>(2 * order + 1));
        ASSERT_EQ(c[0], rho);
        ASSERT_EQ(c[1], 0.0);
        const double T = rng.uniform(0.5, 4.0);
        double analytic = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) analytic += c[k] / std::pow(T, static_cast<double>(k));
        const double h = 1e-5 * T;
        const double numeric =
            (lqmt_cost_at(s, goal, T + h, rho, order) - lqmt_cost_at(s, goal, T - h, rho, order)) / (2 * h);
        ASSERT_NEAR(analytic, numeric, 1e-5 * std::max(1.0, std::abs(analytic)))
            << "order " << order << " defined " << m;
      }
    }
  }
}

TEST(LqmtCost, FullyDefinedJerkCoefficientTwo) {
  // one axis, a0 = 2, a1 = -1: c2 = -9*4 + 6*2*(-1) - 9*1
  const FlatState s(Vec3::Zero(), Vec3::Zero(), Vec3(2, 0, 0));
  PartialGoal goal(Vec3::Zero(), Vec3::Zero(), Vec3(-1, 0, 0));
  const std::vector<double> c = lqmt_cost_derivative(s, goal, 1.0, 3);
  EXPECT_DOUBLE_EQ(c[2], -36.0 - 12.0 - 9.0);
  EXPECT_DOUBLE_EQ(c[3], 0.0);
}

TEST(LqmtMinimize, MatchesDenseScan) {
  oracle::Rng rng(65);
  for (int order = 1; order <= 3; ++order) {
    for (int m = 1; m <= order; ++m) {
      for (int n = 0; n < 8; ++n) {
        const FlatState s = random_state(rng, order);
        const PartialGoal goal = random_goal(rng, m);
        const double rho = rng.uniform(1.0, 50.0);
        const LqmtMinimum best = lqmt_minimize(s, goal, rho, order);
        const oracle::ScanMinimum scan = oracle::dense_scan(
            [&](double T) { return lqmt_cost_at(s, goal, T, rho, order); }, 1e-4, 20.0);
        ASSERT_LE(best.cost, scan.cost + 1e-9 * scan.cost);
        ASSERT_GE(best.cost, scan.cost * (1.0 - 1e-6));
        ASSERT_NEAR(best.cost, lqmt_cost_at(s, goal, best.T, rho, order), 1e-9 * best.cost);
      }
    }
  }
}

TEST(LqmtMinimize, ZeroExactlyAtARestingGoal) {
  oracle::Rng rng(66);
  for (int n = 0; n < 200; ++n) {
    const FlatState rest(rng.vec(-3, 3));
    EXPECT_EQ(lqmt_heuristic(rest, PartialGoal::from_state(rest, 3), 10.0, 3), 0.0);
    EXPECT_EQ(lqmt_heuristic(rest, PartialGoal(rest.p), 10.0, 2), 0.0);
    const FlatState s = random_state(rng, 3);
    EXPECT_EQ(lqmt_heuristic(s, PartialGoal(s.p), 10.0, 1), 0.0);
    // a moving state cannot hold its own position, velocity and acceleration
    EXPECT_GT(lqmt_heuristic(s, PartialGoal::from_state(s, 3), 10.0, 3), 0.0);
    FlatState other = rest;
    other.p.x() += 0.01;
    EXPECT_GT(lqmt_heuristic(other, PartialGoal::from_state(rest, 3), 10.0, 3), 0.0);
  }
}

TEST(LqmtMinimize, OrderOneClosedForm) {
  // C(T) = d^2 / T + rho T, minimized at T = d / sqrt(rho) with cost 2 d sqrt(rho)
  const LqmtMinimum best = lqmt_minimize(FlatState(), PartialGoal(Vec3(3, 4, 0)), 4.0, 1);
  EXPECT_NEAR(best.T, 2.5, 1e-12);
  EXPECT_NEAR(best.cost, 20.0, 1e-12);
}

TEST(LqmtHeuristic, BoundsEveryPiecewiseConstantControl) {
  oracle::Rng rng(67);
  for (int n = 0; n < 1000; ++n) {
    const int order = rng.integer(1, 3);
    const double tau = 0.2;
    const double rho = rng.uniform(1.0, 1e4);
    const FlatState s0 = random_state(rng, order);
    FlatState s = s0;
    double cost = 0.0;
    const int N = rng.integer(1, 10);
    for (int k = 0; k < N; ++k) {
      const Vec3 u = rng.vec(-20, 20);
      s = propagate(s, u, tau, order).truncated(order);
      cost += primitive_cost(u, rho, tau);
    }
    const double h = lqmt_heuristic(s0, PartialGoal::from_state(s, order), rho, order);
    ASSERT_LE(h, cost * (1.0 + 1e-9));
    const Vec3 tol = Vec3::Constant(rng.uniform(0.0, 0.5));
    const Vec3 goal_p = s.p + Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)).cwiseProduct(tol);
    ASSERT_LE(lqmt_region_heuristic(s0, goal_p, tol, rho, order), cost * (1.0 + 1e-9));
  }
}

TEST(RegionHeuristic, MatchesClampedGoalScan) {
  oracle::Rng rng(68);
  for (int order = 1; order <= 3; ++order) {
    for (int n = 0; n < 15; ++n) {
      const FlatState s = random_state(rng, order);
      const Vec3 goal_p = rng.vec(-4, 4);
      const Vec3 tol = rng.vec(0.0, 0.6);
      const double rho = rng.uniform(1.0, 50.0);
      const double h = lqmt_region_heuristic(s, goal_p, tol, rho, order);
      // the best terminal position for fixed T is the unforced end state clamped into the box
      const oracle::ScanMinimum scan = oracle::dense_scan(
          [&](double T) {
            const Vec3 free = s.p + s.v * T + 0.5 * s.a * T * T;
            const Vec3 target = free.cwiseMax(goal_p - tol).cwiseMin(goal_p + tol);
            return lqmt_cost_at(s, PartialGoal(target), T, rho, order);
          },
          1e-4, 20.0);
      ASSERT_LE(h, scan.cost + 1e-9 * std::max(1.0, scan.cost));
      ASSERT_GE(h, scan.cost * (1.0 - 1e-6) - 1e-9);
    }
  }
}

TEST(RegionHeuristic, ZeroInsideAndPointGoalAtZeroTolerance) {
  EXPECT_EQ(lqmt_region_heuristic(FlatState(Vec3(0.1, 0, 0)), Vec3::Zero(), Vec3::Constant(0.2), 10.0, 3), 0.0);
  oracle::Rng rng(69);
  for (int n = 0; n < 100; ++n) {
    const int order = rng.integer(1, 3);
    const FlatState s = random_state(rng, order);
    const Vec3 p = rng.vec(-3, 3);
    const double a = lqmt_region_heuristic(s, p, Vec3::Zero(), 7.0, order);
    const double b = lqmt_heuristic(s, PartialGoal(p), 7.0, order);
    ASSERT_NEAR(a, b, 1e-9 * std::max(1.0, b));
  }
}

TEST(RefinementHeuristic, Examples) {
  const std::vector<Vec3> us = {Vec3(1, 0, 0), Vec3(1, 0, 0), Vec3(1, 0, 0)};
  const Trajectory prior = trajectory_from_controls(FlatState(), us, 0.2, 1.0, 1);
  const double rho = 5.0;
  // on the prior's knot the LQMT term vanishes and only the remaining time counts
  EXPECT_NEAR(refinement_heuristic(FlatState(prior.knot(1).p), 1, prior, rho, 3, 0.2), rho * 0.4, 1e-12);
  EXPECT_NEAR(refinement_heuristic(FlatState(prior.knot(3).p), 3, prior, rho, 3, 0.2), 0.0, 1e-12);
  // past the end the target clamps to the terminal knot
  EXPECT_NEAR(refinement_heuristic(FlatState(prior.knot(3).p), 9, prior, rho, 3, 0.2), 0.0, 1e-12);
  // off the knot it adds the LQMT cost to that knot
  const FlatState off(Vec3(0.0, 0.0, 0));
  EXPECT_NEAR(refinement_heuristic(off, 1, prior, rho, 3, 0.2),
              lqmt_heuristic(off, PartialGoal(prior.knot(1).p), rho, 3) + rho * 0.4, 1e-12);
}

TEST(PositiveRealRoots, KnownPolynomials) {
  // (T - 1)(T - 2)(T + 3) = T^3 - 7 T + 6
  const std::vector<double> c = {1.0, 0.0, -7.0, 6.0};
  std::vector<double> r = positive_real_roots(c);
  std::sort(r.begin(), r.end());
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0], 1.0, 1e-10);
  EXPECT_NEAR(r[1], 2.0, 1e-10);
  const std::vector<double> none = {1.0, 0.0, 1.0};
  EXPECT_TRUE(positive_real_roots(none).empty());
  const std::vector<double> lin = {2.0, -3.0};
  ASSERT_EQ(positive_real_roots(lin).size(), 1u);
  EXPECT_NEAR(positive_real_roots(lin)[0], 1.5, 1e-14);
}

TEST(PositiveRealRoots, RandomRootsAreRecovered) {
  oracle::Rng rng(70);
  for (int n = 0; n < 300; ++n) {
    std::vector<double> roots;
    const int deg = rng.integer(1, 6);
    for (int k = 0; k < deg; ++k) roots.push_back(rng.uniform(-5, 5));
    std::vector<double> c = {1.0};
    for (double x : roots) {
      std::vector<double> next(c.size() + 1, 0.0);
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i] += c[i];
        next[i + 1] -= c[i] * x;
      }
      c = next;
    }
    const std::vector<double> found = positive_real_roots(c);
    for (double x : roots) {
      if (x < 0.05) continue;
      bool hit = false;
      for (double f : found) hit = hit || std::abs(f - x) < 1e-5 * std::max(1.0, x);
      // clustered roots may merge; accept them only if the polynomial vanishes there
      ASSERT_TRUE(hit || std::abs(polyval(c, x)) < 1e-6);
    }
    for (double f : found) ASSERT_GT(f, 0.0);
  }
}

}  // namespace
}  // namespace kinoplan
