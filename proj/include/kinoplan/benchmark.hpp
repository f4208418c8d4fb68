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

// The benchmark corpus used to compare direct jerk-level search against
// refinement from a lower-order prior: four corridors of growing length and
// width, six seeded clutter fields, and a short hover-to-hover flight through
// free space for comparing the control orders.
//
// Benchmark settings slow the robot to 2 m/s so that direct jerk-level
// search is expensive, which is the regime refinement is meant for. Every
// stage merges states on its exact reachable lattice, so no two distinct
// reachable states share a key.

#ifndef KINOPLAN_BENCHMARK_HPP
#define KINOPLAN_BENCHMARK_HPP

#include <string>
#include <vector>

#include "kinoplan/refine.hpp"
#include "kinoplan/scenarios.hpp"

namespace kinoplan {

inline constexpr double kBenchmarkSpeed = 2.0;
inline constexpr std::size_t kBenchmarkBudget = 300000;

struct BenchmarkCase {
  std::string name;
  ScenarioSpec spec;
  bool rest_goal = false;  // also require zero velocity and acceleration
};

inline std::vector<BenchmarkCase> benchmark_corpus() {
  std::vector<BenchmarkCase> out;
  for (int k = 0; k < 4; ++k) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::kCorridor;
    spec.corridor_width = 1.0 + 0.2 * k;
    spec.half_extent = Vec3(1.5 + 0.25 * k, 1.0, 1.0);
    out.push_back({"corridor_" + std::to_string(k), spec});
  }
  for (int k = 4; k < 10; ++k) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::kRandomClutter;
    spec.seed = static_cast<std::uint64_t>(k);
    spec.obstacles = 4 + k / 2;
    spec.half_extent = Vec3(2.0, 1.5, 1.0);
    out.push_back({"clutter_" + std::to_string(k), spec});
  }
  return out;
}

inline BenchmarkCase benchmark_free_space() {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kRandomClutter;
  spec.obstacles = 0;
  spec.half_extent = Vec3(1.25, 1.5, 1.0);
  return {"free_space", spec, true};
}

inline Scenario benchmark_scenario(const BenchmarkCase& c) {
  Scenario sc = generate(c.spec);
  if (c.rest_goal) {
    sc.goal.v = Vec3::Zero();
    sc.goal.a = Vec3::Zero();
  }
  return sc;
}

/// Benchmark settings for a stage at `order` derived from a scenario's
/// recommended config.
inline PlannerConfig benchmark_config(PlannerConfig cfg, int order) {
  cfg.v_max = Vec3::Constant(kBenchmarkSpeed);
  cfg.max_expansions = kBenchmarkBudget;
  cfg.order = 3;
  cfg = stage_config(cfg, order);
  cfg.quantum = lattice_quantum(cfg);
  return cfg;
}

inline RefinePipelineConfig benchmark_pipeline(const PlannerConfig& cfg, int prior_order = 1) {
  RefinePipelineConfig pipeline;
  pipeline.prior_order = prior_order;
  pipeline.final_order = 3;
  pipeline.prior = benchmark_config(cfg, prior_order);
  pipeline.final = benchmark_config(cfg, 3);
  return pipeline;
}

}  // namespace kinoplan

#endif  // KINOPLAN_BENCHMARK_HPP
