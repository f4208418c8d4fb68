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

// Plans through a 0.55 m slot, prints the roll at the wall, then refines a
// velocity-input prior in a corridor.

#include <cmath>
#include <iostream>
#include <numbers>

#include "kinoplan/benchmark.hpp"
#include "kinoplan/kinoplan.hpp"

int main() {
  using namespace kinoplan;

  ScenarioSpec spec;
  spec.gap_width = 0.55;
  const Scenario gap = generate(spec);
  const PlanResult r = plan(gap.start, gap.goal, gap.map, gap.config);
  std::cout << "gap: " << r.controls.size() << " primitives, T " << r.stats.T << " s, "
            << r.stats.expanded << " expansions\n";
  double roll = 0.0;
  for (double t = 0.0; t <= r.stats.T; t += 0.01) {
    const FlatState s = r.trajectory.sample(t).state;
    if (std::abs(s.p.x()) < 0.05) {
      const Mat3 R = desired_rotation(desired_force(s.a, gap.config.g), gap.config.yaw);
      roll = std::max(roll, std::abs(roll_of(R)) * 180.0 / std::numbers::pi);
    }
  }
  std::cout << "roll near the wall: " << roll << " deg\n";

  const Scenario corridor = benchmark_scenario(benchmark_corpus().front());
  const RefineResult refined =
      refine_plan(corridor.start, corridor.goal, corridor.map, benchmark_pipeline(corridor.config));
  std::cout << "corridor: prior " << refined.prior.stats.expanded << " expansions, final "
            << refined.final.stats.expanded << " expansions, cost " << refined.final.stats.total_cost
            << "\n";
  return revalidate(refined.final, corridor.map, benchmark_config(corridor.config, 3)) ? 0 : 1;
}
