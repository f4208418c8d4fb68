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

// The kinoplan command line: scenario, plan, refine, validate and sweep.
//
// Settings are layered defaults < scenario descriptor < --config file <
// --set key=value. Exit codes:
//   0 success
//   1 usage or I/O error (unreadable or malformed input, empty sweep grid)
//   2 NoPath, BudgetExceeded or StartInfeasible
//   3 invalid configuration or scenario spec
//   4 the refinement prior could not be planned
//   5 trajectory failed validation (including an unreadable trajectory)

#ifndef KINOPLAN_TOOLS_CLI_HPP
#define KINOPLAN_TOOLS_CLI_HPP

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kinoplan/kinoplan.hpp"

namespace kinoplan::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kPlanFailed = 2,
  kBadConfig = 3,
  kPriorFailed = 4,
  kInvalid = 5,
};

class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::pair<std::string, std::string> split_setting(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got '" + s + "'");
  return {trim(std::string_view(s).substr(0, eq)), trim(std::string_view(s).substr(eq + 1))};
}

inline std::vector<double> parse_list(const std::string& s) {
  try {
    return parse_doubles(s);
  } catch (const FormatError& e) {
    throw UsageError(std::string("bad number list: ") + e.what());
  }
}

// Options shared by plan and refine.
struct QueryOptions {
  std::string scenario;
  std::string map;
  std::string config;
  std::vector<std::string> sets;
  std::string start, start_v, start_a;
  std::string goal, goal_v, goal_a;
  std::string out;
  std::string record;
  double trace_dt = kTraceDt;

  void attach(CLI::App& app) {
    app.add_option("--scenario", scenario, "scenario descriptor (map, endpoints and config)");
    app.add_option("--map", map, "pcmap v1 point cloud (overrides the scenario's map)");
    app.add_option("--config", config, "config file ([config] key = value)");
    app.add_option("--set", sets, "config override key=value (repeatable)");
    app.add_option("--start", start, "start position \"x y z\"");
    app.add_option("--start-v", start_v, "start velocity");
    app.add_option("--start-a", start_a, "start acceleration");
    app.add_option("--goal", goal, "goal position");
    app.add_option("--goal-v", goal_v, "goal velocity (defines the goal velocity)");
    app.add_option("--goal-a", goal_a, "goal acceleration (defines the goal acceleration)");
    app.add_option("--out", out, "trajectory output (traj v1)");
    app.add_option("--record", record, "run record output (runrec v1)");
    app.add_option("--trace-dt", trace_dt, "trace sampling step of the run record");
  }
};

// A fully resolved planning query.
struct Query {
  PlannerConfig config;
  PointCloudMap map;
  Endpoints endpoints;
  std::optional<ScenarioSpec> scenario;
  std::string map_source;
};

inline Vec3 vec_arg(const std::string& name, const std::string& value) {
  try {
    return parse_vec3(value);
  } catch (const FormatError& e) {
    throw UsageError(name + ": " + e.what());
  }
}

inline PlannerConfig layered_config(PlannerConfig cfg, const std::string& config_path,
                                    const std::vector<std::string>& sets) {
  if (!config_path.empty()) cfg = parse_config(read_file(config_path), cfg);
  for (const auto& s : sets) {
    const auto [k, v] = split_setting(s);
    apply_config_entry(cfg, k, v);
  }
  cfg.validate();
  return cfg;
}

inline Query resolve(const QueryOptions& o) {
  Query q;
  bool have_endpoints = false;
  if (!o.scenario.empty()) {
    const ScenarioDescriptor d = parse_scenario(read_file(o.scenario));
    q.config = d.config;
    q.endpoints = d.endpoints;
    q.scenario = d.spec;
    have_endpoints = true;
    if (o.map.empty()) {
      q.map = generate(d.spec).map;
      q.map_source = "scenario";
    }
  }
  if (!o.map.empty()) {
    q.map = load_pcmap(o.map);
    q.map_source = o.map;
  } else if (o.scenario.empty()) {
    throw UsageError("either --map or --scenario is required");
  }
  q.config = layered_config(q.config, o.config, o.sets);

  if (!o.start.empty()) q.endpoints.start = FlatState(vec_arg("--start", o.start));
  if (!o.start_v.empty()) q.endpoints.start.v = vec_arg("--start-v", o.start_v);
  if (!o.start_a.empty()) q.endpoints.start.a = vec_arg("--start-a", o.start_a);
  if (!o.goal.empty()) q.endpoints.goal = PartialGoal(vec_arg("--goal", o.goal));
  if (!o.goal_v.empty()) q.endpoints.goal.v = vec_arg("--goal-v", o.goal_v);
  if (!o.goal_a.empty()) q.endpoints.goal.a = vec_arg("--goal-a", o.goal_a);
  if (!have_endpoints && (o.start.empty() || o.goal.empty()))
    throw UsageError("--start and --goal are required without --scenario");
  return q;
}

inline void report(std::ostream& out, const std::string& stage, const PlanStats& s) {
  out << stage << ": expanded " << s.expanded << ", J " << format_g9(s.J) << ", T "
      << format_g9(s.T) << ", cost " << format_g9(s.total_cost) << ", " << format_g9(s.wall_ms)
      << " ms\n";
}

inline int failure_code(const PlanningError& e) {
  return e.kind() == PlanFailure::kPriorFailed ? kPriorFailed : kPlanFailed;
}

inline void write_outputs(const QueryOptions& o, const Query& q, const Trajectory& traj,
                          std::vector<std::pair<std::string, PlanStats>> stages,
                          const PlannerConfig& recorded, std::ostream& out) {
  if (!o.out.empty()) {
    write_file_atomic(o.out, write_traj(traj));
    out << "trajectory written to " << o.out << '\n';
  }
  if (!o.record.empty()) {
    RunRecord rec;
    rec.config = recorded;
    rec.scenario = q.scenario;
    rec.map_source = q.map_source;
    rec.endpoints = q.endpoints;
    rec.stages = std::move(stages);
    rec.rows = trace(traj, recorded.yaw, recorded.g, o.trace_dt);
    write_file_atomic(o.record, write_runrec(rec));
    out << "record written to " << o.record << '\n';
  }
}

inline void write_failure_record(const QueryOptions& o, const Query& q, const std::string& status) {
  if (o.record.empty()) return;
  RunRecord rec;
  rec.config = q.config;
  rec.scenario = q.scenario;
  rec.map_source = q.map_source;
  rec.endpoints = q.endpoints;
  rec.status = status;
  write_file_atomic(o.record, write_runrec(rec));
}

}  // namespace detail

/// Runs the command line; all output goes to `out` and `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kinodynamic motion-primitive planner for flat quadrotor models", "kinoplan"};
  app.require_subcommand(1);

  // scenario
  auto* sc_cmd = app.add_subcommand("scenario", "generate a test environment");
  std::string sc_kind = "wall_gap";
  std::vector<std::string> sc_sets;
  std::string sc_map, sc_desc;
  sc_cmd->add_option("--kind", sc_kind, "wall_gap, tilted_window, corridor or random_clutter");
  sc_cmd->add_option("--set", sc_sets, "spec override key=value (repeatable)");
  sc_cmd->add_option("--map", sc_map, "pcmap v1 output")->required();
  sc_cmd->add_option("--descriptor", sc_desc, "scenario descriptor output")->required();

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "plan a trajectory");
  detail::QueryOptions plan_opts;
  plan_opts.attach(*plan_cmd);

  // refine
  auto* refine_cmd = app.add_subcommand("refine", "plan a low-order prior, then refine it");
  detail::QueryOptions ref_opts;
  ref_opts.attach(*refine_cmd);
  int prior_order = 1;
  std::vector<std::string> prior_sets;
  std::string prior_out;
  bool max_with_lqmt = false;
  refine_cmd->add_option("--prior-order", prior_order, "prior control order (1 or 2)");
  refine_cmd->add_option("--prior-set", prior_sets, "prior-stage override key=value");
  refine_cmd->add_option("--prior-out", prior_out, "prior trajectory output (traj v1)");
  refine_cmd->add_flag("--max-with-lqmt", max_with_lqmt,
                       "use max(LQMT, trajectory heuristic) in stage 2");

  // validate
  auto* val_cmd = app.add_subcommand("validate", "re-check a trajectory at higher density");
  std::string val_traj, val_map, val_config, val_scenario;
  std::vector<std::string> val_sets;
  int density = 10;
  val_cmd->add_option("--traj", val_traj, "trajectory (traj v1)")->required();
  val_cmd->add_option("--map", val_map, "pcmap v1 point cloud");
  val_cmd->add_option("--scenario", val_scenario, "scenario descriptor (map and config)");
  val_cmd->add_option("--config", val_config, "config file");
  val_cmd->add_option("--set", val_sets, "config override key=value (repeatable)");
  val_cmd->add_option("--density", density, "collision samples multiplier");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "plan over a grid of rho, tau and du");
  std::vector<std::string> sw_scenarios;
  std::string sw_rho, sw_tau, sw_du, sw_report, sw_records;
  std::vector<std::string> sw_sets;
  sweep_cmd->add_option("--scenario", sw_scenarios, "scenario descriptor (repeatable)")->required();
  sweep_cmd->add_option("--rho", sw_rho, "rho values, comma separated");
  sweep_cmd->add_option("--tau", sw_tau, "tau values");
  sweep_cmd->add_option("--du", sw_du, "du values");
  sweep_cmd->add_option("--set", sw_sets, "config override key=value (repeatable)");
  sweep_cmd->add_option("--report", sw_report, "sweep report output")->required();
  sweep_cmd->add_option("--records", sw_records, "directory for one run record per cell");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sc_cmd) {
      ScenarioSpec spec;
      spec.kind = parse_scenario_kind(sc_kind);
      for (const auto& s : sc_sets) {
        const auto [k, v] = detail::split_setting(s);
        apply_scenario_entry(spec, k, v);
      }
      const Scenario sc = generate(spec);
      write_file_atomic(sc_map, write_pcmap(sc.map));
      write_file_atomic(sc_desc, write_scenario(sc));
      out << scenario_kind_name(spec.kind) << ": " << sc.map.size() << " points\n";
      return kOk;
    }

    if (*plan_cmd) {
      const detail::Query q = detail::resolve(plan_opts);
      try {
        const PlanResult r = plan(q.endpoints.start, q.endpoints.goal, q.map, q.config);
        detail::report(out, "plan", r.stats);
        detail::write_outputs(plan_opts, q, r.trajectory, {{"plan", r.stats}}, q.config, out);
        return kOk;
      } catch (const PlanningError& e) {
        detail::write_failure_record(plan_opts, q, failure_name(e.kind()));
        err << "kinoplan: " << e.what() << '\n';
        return detail::failure_code(e);
      }
    }

    if (*refine_cmd) {
      const detail::Query q = detail::resolve(ref_opts);
      RefinePipelineConfig pc;
      pc.prior_order = prior_order;
      pc.final_order = q.config.order;
      pc.final = q.config;
      pc.prior = detail::layered_config(stage_config(q.config, prior_order), "", prior_sets);
      pc.max_with_lqmt = max_with_lqmt;
      try {
        const RefineResult r = refine_plan(q.endpoints.start, q.endpoints.goal, q.map, pc);
        detail::report(out, "prior", r.prior.stats);
        detail::report(out, "final", r.final.stats);
        if (!prior_out.empty()) write_file_atomic(prior_out, write_traj(r.prior.trajectory));
        detail::write_outputs(ref_opts, q, r.final.trajectory,
                              {{"prior", r.prior.stats}, {"final", r.final.stats}}, q.config, out);
        return kOk;
      } catch (const PlanningError& e) {
        detail::write_failure_record(ref_opts, q, failure_name(e.kind()));
        err << "kinoplan: " << e.what() << '\n';
        return detail::failure_code(e);
      }
    }

    if (*val_cmd) {
      PlannerConfig cfg;
      PointCloudMap map;
      bool have_map = false;
      if (!val_scenario.empty()) {
        const ScenarioDescriptor d = parse_scenario(read_file(val_scenario));
        cfg = d.config;
        if (val_map.empty()) {
          map = generate(d.spec).map;
          have_map = true;
        }
      }
      if (!val_map.empty()) {
        map = load_pcmap(val_map);
        have_map = true;
      }
      if (!have_map) throw UsageError("either --map or --scenario is required");
      cfg = detail::layered_config(cfg, val_config, val_sets);
      if (density < 1) throw UsageError("--density must be at least 1");
      const std::string text = read_file(val_traj);
      Trajectory traj;
      try {
        traj = parse_traj(text);
      } catch (const FormatError& e) {
        err << "kinoplan: invalid trajectory: " << e.what() << '\n';
        return kInvalid;
      }
      // the trajectory carries its own order and rho
      cfg.order = traj.order();
      const ValidationReport rep = revalidate(traj, map, cfg, density);
      if (!rep) {
        err << "kinoplan: segment " << rep.segment << ": " << rep.violation << '\n';
        return kInvalid;
      }
      out << "valid: " << traj.size() << " segments, T " << format_g9(traj.duration()) << '\n';
      return kOk;
    }

    if (*sweep_cmd) {
      if (sw_rho.empty() && sw_tau.empty() && sw_du.empty())
        throw UsageError("empty grid: give at least one of --rho, --tau, --du");
      const auto rhos = detail::parse_list(sw_rho);
      const auto taus = detail::parse_list(sw_tau);
      const auto dus = detail::parse_list(sw_du);
      if ((!sw_rho.empty() && rhos.empty()) || (!sw_tau.empty() && taus.empty()) ||
          (!sw_du.empty() && dus.empty()))
        throw UsageError("empty grid");
      if (!sw_records.empty()) std::filesystem::create_directories(sw_records);

      std::vector<SweepRow> rows;
      for (const auto& path : sw_scenarios) {
        const ScenarioDescriptor d = parse_scenario(read_file(path));
        const Scenario sc = generate(d.spec);
        const PlannerConfig base = detail::layered_config(d.config, "", sw_sets);
        const std::vector<double> rho_axis = rhos.empty() ? std::vector{base.rho} : rhos;
        const std::vector<double> tau_axis = taus.empty() ? std::vector{base.tau} : taus;
        const std::vector<double> du_axis = dus.empty() ? std::vector{base.du} : dus;
        const std::string name = std::filesystem::path(path).stem().string();
        for (double rho : rho_axis) {
          for (double tau : tau_axis) {
            for (double du : du_axis) {
              SweepRow row{name, rho, tau, du, "ok", {}};
              PlannerConfig cfg = base;
              cfg.rho = rho;
              cfg.tau = tau;
              cfg.du = du;
              RunRecord rec;
              rec.config = cfg;
              rec.scenario = d.spec;
              rec.map_source = "scenario";
              rec.endpoints = d.endpoints;
              try {
                cfg.validate();
                const PlanResult r = plan(d.endpoints.start, d.endpoints.goal, sc.map, cfg);
                row.stats = r.stats;
                rec.stages = {{"plan", r.stats}};
                rec.rows = trace(r.trajectory, cfg.yaw, cfg.g);
              } catch (const PlanningError& e) {
                row.status = failure_name(e.kind());
                row.stats.expanded = e.expanded();
              } catch (const ConfigError& e) {
                row.status = "ConfigError";
              }
              rec.status = row.status;
              if (!sw_records.empty()) {
                const std::string cell = name + "_" + std::to_string(rows.size()) + ".runrec";
                write_file_atomic(std::filesystem::path(sw_records) / cell, write_runrec(rec));
              }
              out << name << " rho " << format_g9(rho) << " tau " << format_g9(tau) << " du "
                  << format_g9(du) << ": " << row.status << '\n';
              rows.push_back(std::move(row));
            }
          }
        }
      }
      write_file_atomic(sw_report, write_sweep_report(rows));
      return kOk;
    }
  } catch (const SpecInvalid& e) {
    err << "kinoplan: invalid scenario: " << e.what() << '\n';
    return kBadConfig;
  } catch (const ConfigError& e) {
    err << "kinoplan: invalid config: " << e.what() << '\n';
    return kBadConfig;
  } catch (const UsageError& e) {
    err << "kinoplan: " << e.what() << '\n';
    return kUsage;
  } catch (const FormatError& e) {
    err << "kinoplan: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "kinoplan: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace kinoplan::cli

#endif  // KINOPLAN_TOOLS_CLI_HPP
