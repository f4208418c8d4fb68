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

// Runs every benchmark scenario with direct search at orders 1, 2 and 3 and
// with refinement from order-1 and order-2 priors, and prints one
// tab-separated row per (scenario, mode). Direct jerk-level search takes
// several minutes over the whole corpus.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <string>

#include "kinoplan/benchmark.hpp"
#include "kinoplan/io.hpp"

namespace {

using namespace kinoplan;

void row(const std::string& scenario, const std::string& mode, const std::string& status,
         const PlanStats& s, std::size_t prior_expanded, double seconds) {
  std::cout << scenario << '\t' << mode << '\t' << status << '\t' << s.expanded << '\t'
            << prior_expanded << '\t' << format_g9(s.total_cost) << '\t' << format_g9(s.T) << '\t'
            << format_g9(seconds) << '\n'
            << std::flush;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void run_case(const BenchmarkCase& c, bool skip_direct3) {
  const Scenario sc = benchmark_scenario(c);
  for (int order = 1; order <= 3; ++order) {
    if (order == 3 && skip_direct3) continue;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const PlanResult r = plan(sc.start, sc.goal, sc.map, benchmark_config(sc.config, order));
      row(c.name, "direct" + std::to_string(order), "ok", r.stats, 0, since(t0));
    } catch (const PlanningError& e) {
      PlanStats s;
      s.expanded = e.expanded();
      row(c.name, "direct" + std::to_string(order), failure_name(e.kind()), s, 0, since(t0));
    }
  }
  for (int prior = 1; prior <= 2; ++prior) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const RefineResult r = refine_plan(sc.start, sc.goal, sc.map, benchmark_pipeline(sc.config, prior));
      row(c.name, "refine" + std::to_string(prior), "ok", r.final.stats, r.prior.stats.expanded, since(t0));
    } catch (const PlanningError& e) {
      PlanStats s;
      s.expanded = e.expanded();
      row(c.name, "refine" + std::to_string(prior), failure_name(e.kind()), s, 0, since(t0));
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinoplan benchmark: direct search against refinement"};
  std::string only;
  bool skip_direct3 = false;
  app.add_option("--scenario", only, "run only the named scenario");
  app.add_flag("--skip-direct3", skip_direct3, "skip direct jerk-level search");
  CLI11_PARSE(app, argc, argv);

  std::cout << "scenario\tmode\tstatus\texpanded\tprior_expanded\ttotal_cost\tT\tseconds\n";
  auto cases = benchmark_corpus();
  cases.push_back(benchmark_free_space());
  bool any = false;
  for (const BenchmarkCase& c : cases) {
    if (!only.empty() && c.name != only) continue;
    any = true;
    run_case(c, skip_direct3);
  }
  if (!any) {
    std::cerr << "kinoplan_benchmark: unknown scenario '" << only << "'\n";
    return 1;
  }
  return 0;
}
