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

#ifndef KINOPLAN_PRIMITIVE_HPP
#define KINOPLAN_PRIMITIVE_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "kinoplan/types.hpp"

namespace kinoplan {

/// State reached after applying the constant control `u` (the `order`-th
/// derivative) for `t` seconds. Inside a segment the derivatives at and above
/// the order come from the control itself.
inline FlatState propagate(const FlatState& s0, const Vec3& u, double t, int order = 3) {
  FlatState s;
  switch (order) {
    case 3:
      s.p = u * (t * t * t / 6.0) + s0.a * (t * t / 2.0) + s0.v * t + s0.p;
      s.v = u * (t * t / 2.0) + s0.a * t + s0.v;
      s.a = u * t + s0.a;
      break;
    case 2:
      s.p = u * (t * t / 2.0) + s0.v * t + s0.p;
      s.v = u * t + s0.v;
      s.a = u;
      break;
    case 1:
      s.p = u * t + s0.p;
      s.v = u;
      s.a.setZero();
      break;
    default:
      throw ConfigError("propagate: order must be 1, 2 or 3");
  }
  return s;
}

inline double primitive_cost(const Vec3& u, double rho, double tau) {
  return (u.squaredNorm() + rho) * tau;
}

struct MotionPrimitive {
  FlatState s0;
  Vec3 u = Vec3::Zero();
  double tau = 0.0;
  double cost = 0.0;
  int order = 3;

  MotionPrimitive() = default;
  MotionPrimitive(const FlatState& start, const Vec3& control, double duration, double rho,
                  int ord = 3)
      : s0(start.truncated(ord)),
        u(control),
        tau(duration),
        cost(primitive_cost(control, rho, duration)),
        order(ord) {}

  FlatState eval(double t) const { return propagate(s0, u, t, order); }

  /// Jerk inside the segment.
  Vec3 jerk() const { return order == 3 ? u : Vec3::Zero(); }

  /// Knot state at the end of the segment, truncated to the search order.
  FlatState end() const { return eval(tau).truncated(order); }

  double effort() const { return u.squaredNorm() * tau; }

  /// Taylor coefficients d_0..d_order of x(t) = sum d_k t^k / k! for one axis.
  std::vector<double> coefficients(int axis) const {
    std::vector<double> d;
    for (int k = 0; k < order; ++k) d.push_back(s0[k][axis]);
    d.push_back(u[axis]);
    return d;
  }
};

/// Per-axis grid {-u_max, ..., 0, ..., u_max} crossed over the active axes.
struct ControlSet {
  std::vector<Vec3> inputs;
  double tau = 0.0;

  static ControlSet grid(double u_max, double du, PlanAxes axes, double tau) {
    if (!(du > 0.0) || !(u_max >= du)) throw ConfigError("control set: need u_max >= du > 0");
    const double ratio = u_max / du;
    const long half = std::lround(ratio);
    if (std::abs(ratio - static_cast<double>(half)) > 1e-9 * std::max(1.0, ratio))
      throw ConfigError("control set: u_max must be an integer multiple of du");
    std::vector<double> axis;
    for (long i = -half; i <= half; ++i) axis.push_back(static_cast<double>(i) * du);

    ControlSet set;
    set.tau = tau;
    const bool planar = axes == PlanAxes::k2D;
    for (double ux : axis)
      for (double uy : axis) {
        if (planar) {
          set.inputs.emplace_back(ux, uy, 0.0);
          continue;
        }
        for (double uz : axis) set.inputs.emplace_back(ux, uy, uz);
      }
    return set;
  }

  static ControlSet from_config(const PlannerConfig& cfg) {
    return grid(cfg.u_max, cfg.du, cfg.axes, cfg.tau);
  }

  std::size_t size() const { return inputs.size(); }
};

/// State quanta equal to the lattice spacing reached from a start state by
/// the control grid (positions are offset by the start). With these quanta
/// two knots share a key only when they are the same lattice state, so
/// merging loses nothing.
inline StateQuantum lattice_quantum(const PlannerConfig& cfg) {
  const double du = cfg.du, t = cfg.tau;
  StateQuantum q = cfg.quantum;
  switch (cfg.order) {
    case 3: q = {du * t * t * t / 6.0, du * t * t / 2.0, du * t}; break;
    case 2: q.dp = du * t * t / 2.0; q.dv = du * t; break;
    default: q.dp = du * t; break;
  }
  return q;
}

/// One primitive per control input, in control-set order.
inline std::vector<MotionPrimitive> expand(const FlatState& s, const ControlSet& set, double rho,
                                           int order = 3) {
  if (!s.finite()) throw NonFiniteError("expand: non-finite state");
  std::vector<MotionPrimitive> out;
  out.reserve(set.inputs.size());
  for (const Vec3& u : set.inputs) out.emplace_back(s, u, set.tau, rho, order);
  return out;
}

struct TrajectorySample {
  FlatState state;
  Vec3 jerk = Vec3::Zero();
};

/// Piecewise polynomial made of consecutive primitives.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::vector<MotionPrimitive> segments, int order, double rho)
      : segments_(std::move(segments)), order_(order), rho_(rho) {}

  const std::vector<MotionPrimitive>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  std::size_t size() const { return segments_.size(); }
  int order() const { return order_; }
  double rho() const { return rho_; }

  double duration() const {
    double T = 0.0;
    for (const auto& s : segments_) T += s.tau;
    return T;
  }
  double effort() const {
    double J = 0.0;
    for (const auto& s : segments_) J += s.effort();
    return J;
  }
  double total_cost() const {
    double c = 0.0;
    for (const auto& s : segments_) c += s.cost;
    return c;
  }

  /// Knot state n (n = size() gives the terminal state).
  FlatState knot(std::size_t n) const {
    if (segments_.empty()) return start_;
    if (n < segments_.size()) return segments_[n].s0;
    return segments_.back().end();
  }

  void set_start(const FlatState& s) { start_ = s; }

  /// Evaluates the trajectory at t, clamped to [0, duration()].
  TrajectorySample sample(double t) const {
    TrajectorySample out;
    if (segments_.empty()) {
      out.state = start_;
      return out;
    }
    t = std::max(t, 0.0);
    for (const auto& seg : segments_) {
      if (t <= seg.tau || &seg == &segments_.back()) {
        const double local = std::min(t, seg.tau);
        out.state = seg.eval(local);
        out.jerk = seg.jerk();
        return out;
      }
      t -= seg.tau;
    }
    return out;
  }

  std::vector<Vec3> controls() const {
    std::vector<Vec3> u;
    for (const auto& s : segments_) u.push_back(s.u);
    return u;
  }

 private:
  std::vector<MotionPrimitive> segments_;
  int order_ = 3;
  double rho_ = 0.0;
  FlatState start_;
};

/// Chains `controls` from `s0`, each applied for `tau`.
inline Trajectory trajectory_from_controls(const FlatState& s0, std::span<const Vec3> controls,
                                           double tau, double rho, int order = 3) {
  std::vector<MotionPrimitive> segs;
  segs.reserve(controls.size());
  FlatState s = s0.truncated(order);
  for (const Vec3& u : controls) {
    segs.emplace_back(s, u, tau, rho, order);
    s = segs.back().end();
  }
  Trajectory traj(std::move(segs), order, rho);
  traj.set_start(s0.truncated(order));
  return traj;
}

}  // namespace kinoplan

#endif  // KINOPLAN_PRIMITIVE_HPP
