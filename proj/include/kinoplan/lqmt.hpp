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

// Linear-quadratic minimum-time cost-to-go.
//
// For a chain of `order` integrators driven by u = x^(order), the problem
//
//   min_{u, T}  int_0^T |u|^2 dt + rho T
//
// from a full start state to a goal whose leading `defined` derivatives are
// fixed has, for fixed T, a polynomial optimal control of degree order - 1
// (the trajectory is a polynomial of degree 2 order - 1). Free terminal
// derivatives make the matching costates vanish, which pins higher
// derivatives of u at T to zero. The fixed-T cost has the form
// C(T) = rho T + sum_k e_k T^-k, so dC/dT T^(2 order) is a polynomial whose
// positive roots are the candidate minimizers.

#ifndef KINOPLAN_LQMT_HPP
#define KINOPLAN_LQMT_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "kinoplan/polynomial.hpp"
#include "kinoplan/primitive.hpp"
#include "kinoplan/types.hpp"

namespace kinoplan {

inline constexpr double kConditionLimit = 1e12;
inline constexpr double kDefaultTimeCap = 100.0;

class SingularSystemError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Boundary system in the scaled unknowns x_k = d_{n+k} T^{n+k}, k < n. Rows
// are independent of T, so one factorization serves every duration.
struct BoundarySystem {
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
  Matrix A;
  Matrix A_inv;  // at most 3x3 and well conditioned; cheaper than a solve per call
  double condition = 0.0;

  BoundarySystem(int n, int m) : A(n, n) {
    A.setZero();
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < n; ++k) A(j, k) = 1.0 / factorial(n + k - j);
    // free derivative j: u^(n-1-j)(T) = 0
    for (int j = m; j < n; ++j) {
      const int q = n - 1 - j;
      for (int k = q; k < n; ++k) A(j, k) = 1.0 / factorial(k - q);
    }
    A_inv = Eigen::FullPivLU<Matrix>(A).inverse();
    Eigen::JacobiSVD<Matrix> svd(A);
    const auto& sv = svd.singularValues();
    condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                        : std::numeric_limits<double>::infinity();
  }
};

inline const BoundarySystem& boundary_system(int order, int defined) {
  static const std::array<BoundarySystem, 6> systems = {
      BoundarySystem(1, 1), BoundarySystem(2, 1), BoundarySystem(2, 2),
      BoundarySystem(3, 1), BoundarySystem(3, 2), BoundarySystem(3, 3)};
  static constexpr int offset[4] = {0, 0, 1, 3};
  return systems[offset[order] + defined - 1];
}

// dC/dT terms of one axis with only the terminal position fixed;
// dp = p0 - p_goal.
inline void add_position_goal_terms(std::vector<double>& c, int order, double v0, double a0,
                                    double dp) {
  if (order == 3) {
    c[2] += -5 * a0 * a0;
    c[3] += -40 * a0 * v0;
    c[4] += -60 * a0 * dp - 60 * v0 * v0;
    c[5] += -160 * v0 * dp;
    c[6] += -100 * dp * dp;
  } else if (order == 2) {
    c[2] += -3 * v0 * v0;
    c[3] += -12 * v0 * dp;
    c[4] += -9 * dp * dp;
  } else {
    c[2] += -dp * dp;
  }
}

}  // namespace detail

/// Optimal fixed-duration control between a start state and a partial goal.
/// `d[k]` holds the per-axis coefficient d_{order+k} of the trajectory
/// x(t) = sum_i s0_i t^i / i! + sum_k d_{order+k} t^(order+k) / (order+k)!.
struct MinEffortBvp {
  int order = 3;
  double T = 0.0;
  FlatState start;
  PartialGoal goal;
  std::array<Vec3, 3> d{Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};

  Vec3 control(double t) const {
    Vec3 u = Vec3::Zero();
    for (int k = 0; k < order; ++k) u += d[k] * (std::pow(t, k) / detail::factorial(k));
    return u;
  }

  /// Derivative `j` of the position at time t.
  Vec3 derivative(int j, double t) const {
    Vec3 x = Vec3::Zero();
    for (int i = j; i < order; ++i) x += start[i] * (std::pow(t, i - j) / detail::factorial(i - j));
    for (int k = 0; k < order; ++k) {
      const int pw = order + k - j;
      x += d[k] * (std::pow(t, pw) / detail::factorial(pw));
    }
    return x;
  }

  /// int_0^T |u|^2 dt summed over axes.
  double effort() const {
    if (order == 3) {
      // d = (d3, d4, d5)
      const Vec3& d3 = d[0];
      const Vec3& d4 = d[1];
      const Vec3& d5 = d[2];
      const double T2 = T * T, T3 = T2 * T, T4 = T3 * T, T5 = T4 * T;
      double c = 0.0;
      for (int i = 0; i < 3; ++i) {
        c += d5[i] * d5[i] * T5 / 20.0 + d4[i] * d5[i] * T4 / 4.0 +
             (d4[i] * d4[i] / 3.0 + d3[i] * d5[i] / 3.0) * T3 + d3[i] * d4[i] * T2 +
             d3[i] * d3[i] * T;
      }
      return c;
    }
    double c = 0.0;
    for (int k = 0; k < order; ++k)
      for (int l = 0; l < order; ++l)
        c += d[k].dot(d[l]) * std::pow(T, k + l + 1) /
             (detail::factorial(k) * detail::factorial(l) * (k + l + 1));
    return c;
  }
};

/// Solves the boundary system matching the defined goal derivatives at T.
inline MinEffortBvp solve_min_effort_bvp(const FlatState& start, const PartialGoal& goal,
                                         double T, int order) {
  if (order < 1 || order > 3) throw ConfigError("lqmt: order must be 1, 2 or 3");
  if (!(T > 0.0) || !std::isfinite(T)) throw SingularSystemError("lqmt: duration must be positive");
  const int m = std::min(goal.defined(), order);
  const auto& sys = detail::boundary_system(order, m);
  if (!(sys.condition < kConditionLimit)) throw SingularSystemError("lqmt: ill-conditioned system");

  MinEffortBvp out;
  out.order = order;
  out.T = T;
  out.start = start.truncated(order);
  out.goal = goal.truncated(m);
  double Tpow[7] = {1.0};
  for (int k = 1; k < 7; ++k) Tpow[k] = Tpow[k - 1] * T;
  for (int axis = 0; axis < 3; ++axis) {
    Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1> rhs =
        Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>::Zero(order);
    for (int j = 0; j < m; ++j) {
      double free_motion = 0.0;
      for (int i = j; i < order; ++i)
        free_motion += out.start[i][axis] * Tpow[i - j] / detail::factorial(i - j);
      rhs(j) = Tpow[j] * (out.goal.component(j)[axis] - free_motion);
    }
    const auto x = (sys.A_inv * rhs).eval();
    for (int k = 0; k < order; ++k) out.d[k][axis] = x(k) / Tpow[order + k];
  }
  return out;
}

/// Jerk-input case: quintic trajectory, d = (d3, d4, d5).
inline MinEffortBvp solve_quintic_bvp(const FlatState& start, const PartialGoal& goal, double T) {
  return solve_min_effort_bvp(start, goal, T, 3);
}

/// C(T) = effort of the fixed-T optimum + rho T.
inline double lqmt_cost_at(const FlatState& start, const PartialGoal& goal, double T, double rho,
                           int order = 3) {
  return solve_min_effort_bvp(start, goal, T, order).effort() + rho * T;
}

/// Coefficients c_0..c_{2 order} of dC/dT = sum_k c_k T^-k, summed over axes
/// (c_0 = rho, c_1 = 0).
inline std::vector<double> lqmt_cost_derivative(const FlatState& start, const PartialGoal& goal,
                                                double rho, int order = 3) {
  const int m = std::min(goal.defined(), order);
  std::vector<double> c(2 * order + 1, 0.0);
  c[0] = rho;
  for (int i = 0; i < 3; ++i) {
    const double p0 = start.p[i], v0 = start.v[i], a0 = start.a[i];
    const double dp = p0 - goal.p[i];
    if (order == 3) {
      if (m == 3) {
        const double v1 = (*goal.v)[i], a1 = (*goal.a)[i];
        c[2] += -9 * a0 * a0 + 6 * a0 * a1 - 9 * a1 * a1;
        c[3] += -144 * a0 * v0 - 96 * a0 * v1 + 96 * a1 * v0 + 144 * a1 * v1;
        c[4] += -360 * (a0 - a1) * dp - 576 * v0 * v0 - 1008 * v0 * v1 - 576 * v1 * v1;
        c[5] += -2880 * (v0 + v1) * dp;
        c[6] += -3600 * dp * dp;
      } else if (m == 2) {
        const double v1 = (*goal.v)[i];
        c[2] += -8 * a0 * a0;
        c[3] += -112 * a0 * v0 - 48 * a0 * v1;
        c[4] += -240 * a0 * dp - 384 * v0 * v0 - 432 * v0 * v1 - 144 * v1 * v1;
        c[5] += -(1600 * v0 + 960 * v1) * dp;
        c[6] += -1600 * dp * dp;
      } else {
        detail::add_position_goal_terms(c, 3, v0, a0, dp);
      }
    } else if (order == 2) {
      if (m == 2) {
        const double v1 = (*goal.v)[i];
        c[2] += -4 * (v0 * v0 + v0 * v1 + v1 * v1);
        c[3] += -24 * dp * (v0 + v1);
        c[4] += -36 * dp * dp;
      } else {
        detail::add_position_goal_terms(c, 2, v0, a0, dp);
      }
    } else {
      detail::add_position_goal_terms(c, 1, v0, a0, dp);
    }
  }
  return c;
}

struct LqmtMinimum {
  double cost = 0.0;
  double T = 0.0;
};

/// Minimizes C(T) over (0, t_cap] through the positive roots of dC/dT.
inline LqmtMinimum lqmt_minimize(const FlatState& start, const PartialGoal& goal, double rho,
                                 int order = 3, double t_cap = kDefaultTimeCap) {
  const std::vector<double> c = lqmt_cost_derivative(start, goal, rho, order);
  bool at_goal = true;
  for (std::size_t k = 2; k < c.size(); ++k) at_goal = at_goal && c[k] == 0.0;
  if (at_goal) return {0.0, 0.0};

  // dC/dT * T^(2 order) = c_0 T^(2 order) + c_1 T^(2 order - 1) + ... + c_(2 order)
  std::vector<double> candidates = positive_real_roots(c);
  std::erase_if(candidates, [&](double T) { return T > t_cap; });
  candidates.push_back(t_cap);

  LqmtMinimum best{std::numeric_limits<double>::infinity(), t_cap};
  for (double T : candidates) {
    const double cost = lqmt_cost_at(start, goal, T, rho, order);
    if (cost < best.cost) best = {cost, T};
  }
  return best;
}

inline double lqmt_heuristic(const FlatState& start, const PartialGoal& goal, double rho,
                             int order = 3, double t_cap = kDefaultTimeCap) {
  return lqmt_minimize(start, goal, rho, order, t_cap).cost;
}

/// Admissible cost-to-go into a goal region: the terminal position may lie
/// anywhere in the box goal_p +- tol and every other terminal derivative is
/// free. For a position-only target the fixed-T effort per axis is
/// K e^2 / T^(2 order - 1), with e the distance from the unforced position to
/// the target and K = 1, 3, 20 for orders 1, 2, 3; over the box e shrinks to
/// max(|e| - tol, 0). Between the durations where an axis enters or leaves
/// its slab the cost is an ordinary position-goal LQMT cost towards a shifted
/// goal, so each piece is minimized through the same root polynomial.
inline double lqmt_region_heuristic(const FlatState& start, const Vec3& goal_p, const Vec3& tol,
                                    double rho, int order = 3,
                                    double t_cap = kDefaultTimeCap) {
  if (order < 1 || order > 3) throw ConfigError("lqmt: order must be 1, 2 or 3");
  const FlatState s = start.truncated(order);
  auto unforced = [&](int i, double T) { return s.p[i] + s.v[i] * T + 0.5 * s.a[i] * T * T; };
  const double K = order == 3 ? 20.0 : (order == 2 ? 3.0 : 1.0);
  const int power = 2 * order - 1;

  // signed distance left to the slab: > 0 below it, < 0 above it, 0 inside
  auto shortfall = [&](int i, double T) {
    const double e = goal_p[i] - unforced(i, T);
    if (e > tol[i]) return e - tol[i];
    if (e < -tol[i]) return e + tol[i];
    return 0.0;
  };
  auto cost = [&](double T) {
    double effort = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double e = shortfall(i, T);
      effort += e * e;
    }
    return rho * T + K * effort / std::pow(T, power);
  };

  bool inside = true;
  for (int i = 0; i < 3; ++i) inside = inside && shortfall(i, 0.0) == 0.0;
  if (inside) return 0.0;

  // durations at which some axis crosses a slab face
  std::vector<double> breaks;
  for (int i = 0; i < 3; ++i) {
    for (double face : {goal_p[i] - tol[i], goal_p[i] + tol[i]}) {
      const double a = 0.5 * s.a[i], b = s.v[i], c = s.p[i] - face;
      const double coeffs[3] = {a, b, c};
      for (double T : positive_real_roots(coeffs))
        if (T < t_cap) breaks.push_back(T);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.push_back(t_cap);

  double best = cost(t_cap);
  double lo = 0.0;
  for (double hi : breaks) {
    if (hi > lo) {
      const double mid = 0.5 * (lo + hi);
      std::vector<double> c(2 * order + 1, 0.0);
      c[0] = rho;
      bool active = false;
      for (int i = 0; i < 3; ++i) {
        const double e = shortfall(i, mid);
        if (e == 0.0) continue;
        active = true;
        // the piece behaves like a point goal at the near face
        const double face = e > 0.0 ? goal_p[i] - tol[i] : goal_p[i] + tol[i];
        detail::add_position_goal_terms(c, order, s.v[i], s.a[i], s.p[i] - face);
      }
      if (!active) {
        // cost is rho T on this piece; the infimum is at its left end
        best = std::min(best, lo > 0.0 ? cost(lo) : 0.0);
      } else {
        for (double T : positive_real_roots(c))
          if (T > lo && T < hi) best = std::min(best, cost(T));
      }
      if (lo > 0.0) best = std::min(best, cost(lo));
    }
    lo = hi;
  }
  return best;
}

/// Cost-to-go guided by a lower-order prior trajectory: the LQMT cost to the
/// prior's knot at T_n = n tau (goal defined up to the prior's order) plus
/// rho times the prior's remaining duration. Past the prior's end the knot
/// index clamps to the terminal state.
inline double refinement_heuristic(const FlatState& s, int n, const Trajectory& prior, double rho,
                                   int order, double tau, double t_cap = kDefaultTimeCap) {
  const double Tp = prior.duration();
  const double Tn = std::clamp(static_cast<double>(std::max(n, 0)) * tau, 0.0, Tp);
  const FlatState knot = Tn >= Tp ? prior.knot(prior.size()) : prior.sample(Tn).state;
  const int defined = std::min(prior.order(), order);
  const double h1 = lqmt_heuristic(s, PartialGoal::from_state(knot, defined), rho, order, t_cap);
  const double h2 = rho * (Tp - Tn);
  return h1 + h2;
}

}  // namespace kinoplan

#endif  // KINOPLAN_LQMT_HPP
