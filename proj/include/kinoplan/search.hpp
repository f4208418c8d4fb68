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

// A* over the motion-primitive graph. Nodes are knot states, edges are
// constant-control primitives of duration tau that pass the derivative-bound
// and collision checks; edge cost is (|u|^2 + rho) tau.

#ifndef KINOPLAN_SEARCH_HPP
#define KINOPLAN_SEARCH_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "kinoplan/collision.hpp"
#include "kinoplan/feasibility.hpp"
#include "kinoplan/lqmt.hpp"
#include "kinoplan/primitive.hpp"

namespace kinoplan {

enum class PlanFailure { kStartInfeasible, kNoPath, kBudgetExceeded, kPriorFailed };

inline const char* failure_name(PlanFailure f) {
  switch (f) {
    case PlanFailure::kStartInfeasible: return "StartInfeasible";
    case PlanFailure::kNoPath: return "NoPath";
    case PlanFailure::kBudgetExceeded: return "BudgetExceeded";
    case PlanFailure::kPriorFailed: return "PriorFailed";
  }
  return "unknown";
}

/// Lowest-f open node when the search stopped early.
struct Incumbent {
  FlatState state;
  double g = 0.0;
  double f = 0.0;
  int depth = 0;
};

class PlanningError : public Error {
 public:
  PlanningError(PlanFailure kind, const std::string& what, std::optional<Incumbent> inc = {},
                std::size_t expanded = 0)
      : Error(std::string(failure_name(kind)) + ": " + what),
        kind_(kind),
        incumbent_(std::move(inc)),
        expanded_(expanded) {}

  PlanFailure kind() const { return kind_; }
  const std::optional<Incumbent>& incumbent() const { return incumbent_; }
  std::size_t expanded() const { return expanded_; }

 private:
  PlanFailure kind_;
  std::optional<Incumbent> incumbent_;
  std::size_t expanded_;
};

struct PlanStats {
  std::size_t expanded = 0;
  std::size_t generated = 0;
  double wall_ms = 0.0;
  double J = 0.0;
  double T = 0.0;
  double total_cost = 0.0;
  double heuristic_weight = 1.0;
  bool optimal = true;  // false once the heuristic is inflated or inadmissible
};

struct PlanResult {
  Trajectory trajectory;
  std::vector<Vec3> controls;
  PlanStats stats;
};

/// Cost-to-go estimate of a knot state at the given depth.
using Heuristic = std::function<double(const FlatState&, int)>;

inline Heuristic zero_heuristic() {
  return [](const FlatState&, int) { return 0.0; };
}

/// The search's default heuristic. A goal that must be met exactly gets the
/// LQMT cost for its defined components; a goal with tolerances gets the
/// region bound on position (velocity and acceleration relaxed), which stays
/// admissible for every state the goal test accepts.
inline Heuristic lqmt_heuristic_for(const PartialGoal& goal, const PlannerConfig& cfg) {
  const PartialGoal g = goal.truncated(cfg.order);
  const GoalTolerance& tol = cfg.goal_tol;
  const bool exact = tol.p == 0.0 && (!g.v || tol.v == 0.0) && (!g.a || tol.a == 0.0);
  if (exact) {
    return [g, rho = cfg.rho, order = cfg.order, cap = cfg.t_cap](const FlatState& s, int) {
      return lqmt_heuristic(s, g, rho, order, cap);
    };
  }
  return [p = g.p, t = Vec3::Constant(tol.p), rho = cfg.rho, order = cfg.order,
          cap = cfg.t_cap](const FlatState& s, int) {
    return lqmt_region_heuristic(s, p, t, rho, order, cap);
  };
}

/// Componentwise tolerance test on the goal components the order carries.
inline bool in_goal_region(const FlatState& s, const PartialGoal& goal, const GoalTolerance& tol,
                           int order = 3) {
  if (((s.p - goal.p).cwiseAbs().array() > tol.p).any()) return false;
  if (order >= 2 && goal.v && ((s.v - *goal.v).cwiseAbs().array() > tol.v).any()) return false;
  if (order >= 3 && goal.a && ((s.a - *goal.a).cwiseAbs().array() > tol.a).any()) return false;
  return true;
}

namespace detail {

struct SearchRecord {
  FlatState state;
  double g = 0.0;
  double f = 0.0;
  std::int32_t parent = -1;
  std::int32_t control = -1;  // index into the control set
  std::int32_t depth = 0;
};

// Lower f first, then higher g, then the lexicographically smaller control
// path. Records are immutable once created, so the ordering is stable.
class RecordOrder {
 public:
  explicit RecordOrder(const std::vector<SearchRecord>* arena) : arena_(arena) {}

  // true when `a` must leave the heap after `b`
  bool operator()(std::int32_t a, std::int32_t b) const {
    const SearchRecord& ra = (*arena_)[a];
    const SearchRecord& rb = (*arena_)[b];
    if (ra.f != rb.f) return ra.f > rb.f;
    if (ra.g != rb.g) return ra.g < rb.g;
    return path(a) > path(b);
  }

 private:
  std::vector<std::int32_t> path(std::int32_t i) const {
    std::vector<std::int32_t> p;
    for (; i >= 0 && (*arena_)[i].parent >= 0; i = (*arena_)[i].parent)
      p.push_back((*arena_)[i].control);
    std::reverse(p.begin(), p.end());
    return p;
  }

  const std::vector<SearchRecord>* arena_;
};

inline std::string start_problem(const FlatState& s, const PlannerConfig& cfg) {
  if (!s.finite()) return "non-finite start state";
  if (!cfg.workspace.contains(s.p)) return "start outside workspace";
  if (cfg.order >= 2 && ((s.v.cwiseAbs() - cfg.v_max).array() > kBoundSlack).any())
    return "start velocity exceeds bound";
  if (cfg.order >= 3 && ((s.a.cwiseAbs() - cfg.a_max).array() > kBoundSlack).any())
    return "start acceleration exceeds bound";
  try {
    (void)desired_rotation(desired_force(s.a, cfg.g), cfg.yaw);
    return "";
  } catch (const AttitudeError& e) {
    return std::string("start attitude undefined: ") + e.what();
  }
}

}  // namespace detail

/// Minimum-cost control sequence from `start` into the goal region.
///
/// Throws PlanningError (StartInfeasible, NoPath, BudgetExceeded) and
/// ConfigError. With an admissible heuristic and weight 1 the result is
/// optimal over the graph at the configured state resolution.
inline PlanResult plan(const FlatState& start_in, const PartialGoal& goal,
                       const PointCloudMap& map, const PlannerConfig& cfg,
                       const Heuristic& heuristic_in = {}, bool heuristic_admissible = true) {
  const auto t0 = std::chrono::steady_clock::now();
  cfg.validate();
  goal.validate();
  const int order = cfg.order;
  const FlatState start = start_in.truncated(order);
  const Heuristic heuristic = heuristic_in ? heuristic_in : lqmt_heuristic_for(goal, cfg);
  const ControlSet controls = ControlSet::from_config(cfg);
  const DerivativeBounds bounds = DerivativeBounds::from_config(cfg);
  const CollisionParams cparams = CollisionParams::from_config(cfg);
  const double crop = std::max(cfg.robot.r, cfg.robot.h);

  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };

  if (auto why = detail::start_problem(start, cfg); !why.empty())
    throw PlanningError(PlanFailure::kStartInfeasible, why);
  if (pose_collides(ellipsoid_at(start, cfg.robot, cfg.yaw, cfg.g), map, crop))
    throw PlanningError(PlanFailure::kStartInfeasible, "start pose collides with the map");

  PlanResult result;
  result.stats.heuristic_weight = cfg.heuristic_weight;
  result.stats.optimal = heuristic_admissible && cfg.heuristic_weight == 1.0;

  if (in_goal_region(start, goal, cfg.goal_tol, order)) {
    result.trajectory = trajectory_from_controls(start, {}, cfg.tau, cfg.rho, order);
    result.stats.wall_ms = elapsed_ms();
    return result;
  }

  std::vector<detail::SearchRecord> arena;
  arena.reserve(1 << 16);
  struct Slot {
    std::int32_t record;
    bool closed;
  };
  std::unordered_map<DiscreteKey, Slot, DiscreteKeyHash> table;
  std::priority_queue<std::int32_t, std::vector<std::int32_t>, detail::RecordOrder> open{
      detail::RecordOrder(&arena)};

  const double w = cfg.heuristic_weight;
  arena.push_back({start, 0.0, w * heuristic(start, 0), -1, -1, 0});
  table[quantize(start, cfg.quantum, order)] = {0, false};
  open.push(0);

  std::size_t expanded = 0;
  std::size_t generated = 1;
  while (!open.empty()) {
    const std::int32_t idx = open.top();
    open.pop();
    const detail::SearchRecord rec = arena[idx];
    Slot& slot = table.at(quantize(rec.state, cfg.quantum, order));
    if (slot.record != idx || slot.closed) continue;  // stale heap entry
    slot.closed = true;

    if (in_goal_region(rec.state, goal, cfg.goal_tol, order)) {
      std::vector<Vec3> us;
      for (std::int32_t i = idx; arena[i].parent >= 0; i = arena[i].parent)
        us.push_back(controls.inputs[arena[i].control]);
      std::reverse(us.begin(), us.end());
      result.trajectory = trajectory_from_controls(start, us, cfg.tau, cfg.rho, order);
      result.controls = std::move(us);
      result.stats.expanded = expanded;
      result.stats.generated = generated;
      result.stats.J = result.trajectory.effort();
      result.stats.T = result.trajectory.duration();
      result.stats.total_cost = result.trajectory.total_cost();
      result.stats.wall_ms = elapsed_ms();
      return result;
    }

    if (expanded >= cfg.max_expansions) {
      throw PlanningError(PlanFailure::kBudgetExceeded,
                          "expansion budget of " + std::to_string(cfg.max_expansions) + " reached",
                          Incumbent{rec.state, rec.g, rec.f, rec.depth}, expanded);
    }
    ++expanded;

    for (std::size_t ci = 0; ci < controls.inputs.size(); ++ci) {
      const MotionPrimitive prim(rec.state, controls.inputs[ci], cfg.tau, cfg.rho, order);
      if (!check_dynamic(prim, bounds)) continue;
      const FlatState next = prim.end();
      const DiscreteKey key = quantize(next, cfg.quantum, order);
      const double g = rec.g + prim.cost;
      const auto it = table.find(key);
      if (it != table.end() && !(g < arena[it->second.record].g - 1e-9)) continue;
      if (primitive_collides(prim, map, cparams)) continue;

      const auto next_idx = static_cast<std::int32_t>(arena.size());
      arena.push_back({next, g, g + w * heuristic(next, rec.depth + 1), idx,
                       static_cast<std::int32_t>(ci), rec.depth + 1});
      table.insert_or_assign(key, Slot{next_idx, false});
      open.push(next_idx);
      ++generated;
    }
  }
  throw PlanningError(PlanFailure::kNoPath, "frontier exhausted after " +
                                                std::to_string(expanded) + " expansions",
                      std::nullopt, expanded);
}

struct ValidationReport {
  bool ok = true;
  int segment = -1;
  std::string violation;

  explicit operator bool() const { return ok; }
};

/// Re-checks continuity, derivative bounds and collisions (at `density` times
/// the configured sample count) of a trajectory.
inline ValidationReport revalidate(const Trajectory& traj, const PointCloudMap& map,
                                   const PlannerConfig& cfg, int density = 10) {
  ValidationReport rep;
  auto fail = [&](int seg, const std::string& why) {
    rep.ok = false;
    rep.segment = seg;
    rep.violation = why;
    return rep;
  };
  const DerivativeBounds bounds = DerivativeBounds::from_config(cfg);
  CollisionParams cp = CollisionParams::from_config(cfg);
  cp.samples = std::max(2, cfg.samples * density);
  const auto& segs = traj.segments();
  for (std::size_t n = 0; n < segs.size(); ++n) {
    const MotionPrimitive& seg = segs[n];
    if (!seg.s0.finite() || !seg.u.allFinite() || !(seg.tau > 0.0))
      return fail(static_cast<int>(n), "malformed segment");
    if (n > 0) {
      const FlatState prev = segs[n - 1].end();
      for (int k = 0; k < seg.order; ++k) {
        const double gap = (prev[k] - seg.s0[k]).cwiseAbs().maxCoeff();
        if (gap > 1e-9) {
          std::ostringstream os;
          os << "discontinuity of " << gap << " in derivative " << k << " at knot " << n;
          return fail(static_cast<int>(n), os.str());
        }
      }
    }
    const DynamicVerdict dv = check_dynamic(seg, bounds);
    if (!dv) return fail(static_cast<int>(n), describe(dv));
    if (primitive_collides(seg, map, cp)) return fail(static_cast<int>(n), "collision");
  }
  return rep;
}

inline ValidationReport revalidate(const PlanResult& result, const PointCloudMap& map,
                                   const PlannerConfig& cfg, int density = 10) {
  return revalidate(result.trajectory, map, cfg, density);
}

}  // namespace kinoplan

#endif  // KINOPLAN_SEARCH_HPP
