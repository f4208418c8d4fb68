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

// Hierarchical planning: a low-order (velocity or acceleration input) plan is
// used as the heuristic of the final higher-order search.

#ifndef KINOPLAN_REFINE_HPP
#define KINOPLAN_REFINE_HPP

#include <algorithm>
#include <cmath>

#include "kinoplan/search.hpp"

namespace kinoplan {

/// Plans with the control at derivative `order` (1 velocity, 2 acceleration).
/// The start and goal are cut down to the order's state space.
inline PlanResult plan_low_order(const FlatState& start, const PartialGoal& goal,
                                 const PointCloudMap& map, PlannerConfig cfg, int order) {
  if (order < 1 || order > 2) throw ConfigError("plan_low_order: order must be 1 or 2");
  cfg.order = order;
  return plan(start.truncated(order), goal.truncated(order), map, cfg);
}

/// Settings for a stage at `order` derived from a jerk-level config: the
/// control grid keeps its number of steps per axis but spans the bound of the
/// derivative being controlled (velocity for order 1, acceleration for
/// order 2).
inline PlannerConfig stage_config(PlannerConfig cfg, int order) {
  if (order < 1 || order > 3) throw ConfigError("stage order must be 1, 2 or 3");
  const double steps = std::round(cfg.u_max / cfg.du);
  if (order == 1) cfg.u_max = cfg.v_max.minCoeff();
  if (order == 2) cfg.u_max = cfg.a_max.minCoeff();
  if (order < 3 && cfg.order == 3) cfg.du = cfg.u_max / steps;
  cfg.order = order;
  return cfg;
}

struct RefinePipelineConfig {
  int prior_order = 1;
  int final_order = 3;
  PlannerConfig prior;  // order is overridden by prior_order
  PlannerConfig final;  // order is overridden by final_order
  // h = max(LQMT, trajectory heuristic); off by default
  bool max_with_lqmt = false;

  void validate() const {
    if (prior_order < 1 || prior_order > 2) throw ConfigError("refine: prior order must be 1 or 2");
    if (final_order < 2 || final_order > 3) throw ConfigError("refine: final order must be 2 or 3");
    if (prior_order >= final_order) throw ConfigError("refine: prior order must be below final");
  }
};

struct RefineResult {
  PlanResult prior;
  PlanResult final;
};

inline RefineResult refine_plan(const FlatState& start, const PartialGoal& goal,
                                const PointCloudMap& map, const RefinePipelineConfig& pipeline) {
  pipeline.validate();
  RefineResult out;
  try {
    out.prior = plan_low_order(start, goal, map, pipeline.prior, pipeline.prior_order);
  } catch (const PlanningError& e) {
    throw PlanningError(PlanFailure::kPriorFailed, e.what(), e.incumbent(), e.expanded());
  }

  PlannerConfig cfg = pipeline.final;
  cfg.order = pipeline.final_order;
  const Trajectory& prior = out.prior.trajectory;
  const PartialGoal final_goal = goal.truncated(cfg.order);
  Heuristic h = [&prior, rho = cfg.rho, order = cfg.order, tau = cfg.tau, cap = cfg.t_cap](
                    const FlatState& s, int depth) {
    return refinement_heuristic(s, depth, prior, rho, order, tau, cap);
  };
  if (pipeline.max_with_lqmt) {
    Heuristic lq = lqmt_heuristic_for(final_goal, cfg);
    h = [h, lq](const FlatState& s, int depth) { return std::max(h(s, depth), lq(s, depth)); };
  }
  out.final = plan(start.truncated(cfg.order), final_goal, map, cfg, h, false);
  return out;
}

}  // namespace kinoplan

#endif  // KINOPLAN_REFINE_HPP
