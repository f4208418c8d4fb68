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

#ifndef KINOPLAN_TYPES_HPP
#define KINOPLAN_TYPES_HPP

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace kinoplan {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kGravity = 9.81;

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

inline bool all_finite(const Vec3& v) { return v.allFinite(); }

/// Position, velocity and acceleration of the flat output.
///
/// For searches below jerk order the components at and above the control
/// order are kept at zero at the knots.
struct FlatState {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 a = Vec3::Zero();

  FlatState() = default;
  FlatState(const Vec3& pos, const Vec3& vel, const Vec3& acc) : p(pos), v(vel), a(acc) {}
  explicit FlatState(const Vec3& pos) : p(pos) {}

  bool finite() const { return p.allFinite() && v.allFinite() && a.allFinite(); }

  /// Component `k` of the state: 0 = p, 1 = v, 2 = a.
  const Vec3& operator[](int k) const { return k == 0 ? p : (k == 1 ? v : a); }
  Vec3& operator[](int k) { return k == 0 ? p : (k == 1 ? v : a); }

  /// Drops every derivative at or above `order` (order 1 keeps only p).
  FlatState truncated(int order) const {
    FlatState s = *this;
    if (order < 3) s.a.setZero();
    if (order < 2) s.v.setZero();
    return s;
  }

  friend bool operator==(const FlatState& l, const FlatState& r) {
    return l.p == r.p && l.v == r.v && l.a == r.a;
  }
};

/// Goal state with a prefix of defined derivatives: {p}, {p,v} or {p,v,a}.
struct PartialGoal {
  Vec3 p = Vec3::Zero();
  std::optional<Vec3> v;
  std::optional<Vec3> a;

  PartialGoal() = default;
  explicit PartialGoal(const Vec3& pos) : p(pos) {}
  PartialGoal(const Vec3& pos, const Vec3& vel) : p(pos), v(vel) {}
  PartialGoal(const Vec3& pos, const Vec3& vel, const Vec3& acc) : p(pos), v(vel), a(acc) {}

  static PartialGoal from_state(const FlatState& s, int defined) {
    PartialGoal g(s.p);
    if (defined >= 2) g.v = s.v;
    if (defined >= 3) g.a = s.a;
    return g;
  }

  /// Number of defined components (1, 2 or 3).
  int defined() const { return a ? 3 : (v ? 2 : 1); }

  /// Keeps at most `n` leading components.
  PartialGoal truncated(int n) const {
    PartialGoal g = *this;
    if (n < 3) g.a.reset();
    if (n < 2) g.v.reset();
    return g;
  }

  const Vec3& component(int k) const { return k == 0 ? p : (k == 1 ? *v : *a); }

  void validate() const {
    if (a && !v) throw ConfigError("goal: acceleration defined without velocity");
    if (!p.allFinite() || (v && !v->allFinite()) || (a && !a->allFinite()))
      throw NonFiniteError("goal: non-finite component");
  }
};

struct RobotGeometry {
  double r = 0.35;  // lateral semi-axis
  double h = 0.1;   // vertical semi-axis

  void validate() const {
    if (!(r > 0.0) || !(h > 0.0)) throw ConfigError("robot: r and h must be positive");
    if (r < h) throw ConfigError("robot: r must be at least h");
  }
};

enum class PlanAxes { k2D, k3D };

inline int axis_count(PlanAxes axes) { return axes == PlanAxes::k2D ? 2 : 3; }

struct StateQuantum {
  double dp = 0.05;
  double dv = 0.05;
  double da = 0.05;
};

struct GoalTolerance {
  double p = 0.5;
  double v = 0.5;
  double a = 0.5;
};

struct Box {
  Vec3 lo = Vec3::Constant(-std::numeric_limits<double>::infinity());
  Vec3 hi = Vec3::Constant(std::numeric_limits<double>::infinity());

  bool contains(const Vec3& q) const {
    return (q.array() >= lo.array()).all() && (q.array() <= hi.array()).all();
  }
  bool bounded() const { return lo.allFinite() && hi.allFinite(); }
};

struct PlannerConfig {
  double rho = 10000.0;
  double tau = 0.2;
  double u_max = 50.0;
  double du = 12.5;
  Vec3 v_max = Vec3::Constant(7.0);
  Vec3 a_max = Vec3::Constant(10.0);
  Vec3 j_max = Vec3::Constant(50.0);
  double yaw = 0.0;
  double g = kGravity;
  PlanAxes axes = PlanAxes::k3D;
  int order = 3;  // derivative order of the control input: 1 vel, 2 acc, 3 jerk
  int samples = 10;
  StateQuantum quantum;
  GoalTolerance goal_tol;
  RobotGeometry robot;
  Box workspace;
  std::size_t max_expansions = 1'000'000;
  double heuristic_weight = 1.0;
  double t_cap = 100.0;

  void validate() const {
    auto positive = [](const Vec3& b) { return b.allFinite() && (b.array() > 0.0).all(); };
    if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("rho must be positive");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be positive");
    if (!(du > 0.0) || !std::isfinite(du)) throw ConfigError("du must be positive");
    if (!(u_max >= du) || !std::isfinite(u_max)) throw ConfigError("u_max must be at least du");
    if (!positive(v_max) || !positive(a_max) || !positive(j_max))
      throw ConfigError("derivative bounds must be positive");
    if (!(g > 0.0)) throw ConfigError("g must be positive");
    if (!std::isfinite(yaw)) throw ConfigError("yaw must be finite");
    if (order < 1 || order > 3) throw ConfigError("order must be 1, 2 or 3");
    if (samples < 2) throw ConfigError("samples must be at least 2");
    if (!(quantum.dp > 0.0) || !(quantum.dv > 0.0) || !(quantum.da > 0.0))
      throw ConfigError("state quanta must be positive");
    if (!(goal_tol.p >= 0.0) || !(goal_tol.v >= 0.0) || !(goal_tol.a >= 0.0))
      throw ConfigError("goal tolerances must be non-negative");
    if ((workspace.lo.array() > workspace.hi.array()).any())
      throw ConfigError("workspace min exceeds max");
    if (!(heuristic_weight >= 1.0)) throw ConfigError("heuristic_weight must be >= 1");
    if (!(t_cap > 0.0)) throw ConfigError("t_cap must be positive");
    if (max_expansions == 0) throw ConfigError("max_expansions must be positive");
    const double steps = u_max / du;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
      throw ConfigError("u_max must be an integer multiple of du");
    robot.validate();
  }
};

/// Integer cell of a state; components above the search order stay zero.
struct DiscreteKey {
  std::array<std::int64_t, 9> cells{};

  friend bool operator==(const DiscreteKey&, const DiscreteKey&) = default;
  friend auto operator<=>(const DiscreteKey&, const DiscreteKey&) = default;
};

struct DiscreteKeyHash {
  std::size_t operator()(const DiscreteKey& k) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int64_t c : k.cells) {
      h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

/// Rounds every component to its quantum, half away from zero.
inline DiscreteKey quantize(const FlatState& s, const StateQuantum& q, int order = 3) {
  if (!s.finite()) throw NonFiniteError("quantize: non-finite state");
  if (!(q.dp > 0.0) || !(q.dv > 0.0) || !(q.da > 0.0))
    throw ConfigError("quantize: quanta must be positive");
  DiscreteKey key;
  const double quanta[3] = {q.dp, q.dv, q.da};
  for (int k = 0; k < std::min(order, 3); ++k) {
    for (int i = 0; i < 3; ++i) key.cells[3 * k + i] = std::llround(s[k][i] / quanta[k]);
  }
  return key;
}

/// Center of the cell addressed by `key`.
inline FlatState cell_center(const DiscreteKey& key, const StateQuantum& q) {
  FlatState s;
  const double quanta[3] = {q.dp, q.dv, q.da};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i) s[k][i] = static_cast<double>(key.cells[3 * k + i]) * quanta[k];
  return s;
}

}  // namespace kinoplan

#endif  // KINOPLAN_TYPES_HPP
