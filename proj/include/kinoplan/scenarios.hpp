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

// Point-cloud test environments: a wall with a vertical slot, a wall with a
// tilted rectangular window, a straight corridor and seeded pillar clutter.
//
// Walls are single sheets in the plane x = 0 sampled on a regular grid, and
// they reach `kWallMargin` past the workspace so that nothing can go around.
// Flight is along +x.

#ifndef KINOPLAN_SCENARIOS_HPP
#define KINOPLAN_SCENARIOS_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "kinoplan/collision.hpp"
#include "kinoplan/types.hpp"

namespace kinoplan {

class SpecInvalid : public Error {
 public:
  using Error::Error;
};

enum class ScenarioKind { kWallGap, kTiltedWindow, kCorridor, kRandomClutter };

inline const char* scenario_kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kWallGap: return "wall_gap";
    case ScenarioKind::kTiltedWindow: return "tilted_window";
    case ScenarioKind::kCorridor: return "corridor";
    case ScenarioKind::kRandomClutter: return "random_clutter";
  }
  return "unknown";
}

inline ScenarioKind parse_scenario_kind(const std::string& s) {
  if (s == "wall_gap") return ScenarioKind::kWallGap;
  if (s == "tilted_window") return ScenarioKind::kTiltedWindow;
  if (s == "corridor") return ScenarioKind::kCorridor;
  if (s == "random_clutter") return ScenarioKind::kRandomClutter;
  throw SpecInvalid("unknown scenario kind '" + s + "'");
}

inline constexpr double kWallMargin = 1.0;

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kWallGap;
  double gap_width = 0.75;     // wall_gap slot width (y)
  double window_w = 0.4;       // tilted_window short side
  double window_h = 0.8;       // tilted_window long side
  double tilt_deg = 45.0;      // long side angle from the horizontal y axis
  double spacing = 0.05;       // surface sampling step
  Vec3 half_extent{2.0, 1.0, 1.0};  // workspace is [-e, e] around the origin
  double corridor_width = 1.2;  // corridor wall-to-wall distance
  int obstacles = 12;           // random_clutter pillars
  double pillar_radius = 0.15;
  std::uint64_t seed = 1;
  PlanAxes axes = PlanAxes::k2D;  // recommended planning dimension
  RobotGeometry robot;            // the robot the surfaces must be watertight for

  void validate() const {
    try {
      robot.validate();
    } catch (const ConfigError& e) {
      throw SpecInvalid(e.what());
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) throw SpecInvalid("spacing must be positive");
    if (spacing > std::min(robot.r, robot.h) / 2.0 + 1e-12)
      throw SpecInvalid("spacing exceeds min(r, h)/2 of the robot");
    if (!half_extent.allFinite() || (half_extent.array() <= 0.0).any())
      throw SpecInvalid("extents must be positive");
    switch (kind) {
      case ScenarioKind::kWallGap:
        if (!(gap_width > 0.0) || gap_width >= 2.0 * half_extent.y())
          throw SpecInvalid("gap width must lie inside the workspace");
        break;
      case ScenarioKind::kTiltedWindow:
        if (!(window_w > 0.0) || !(window_h >= window_w)) throw SpecInvalid("bad window aperture");
        if (!std::isfinite(tilt_deg)) throw SpecInvalid("tilt must be finite");
        if (window_h >= 2.0 * std::min(half_extent.y(), half_extent.z()))
          throw SpecInvalid("window must fit inside the workspace");
        break;
      case ScenarioKind::kCorridor:
        if (!(corridor_width > 2.0 * robot.r) || corridor_width >= 2.0 * half_extent.y() + 2.0)
          throw SpecInvalid("corridor width must exceed the robot diameter");
        break;
      case ScenarioKind::kRandomClutter:
        if (obstacles < 0) throw SpecInvalid("obstacle count must be non-negative");
        if (!(pillar_radius > 0.0)) throw SpecInvalid("pillar radius must be positive");
        break;
    }
  }
};

struct Scenario {
  ScenarioSpec spec;
  PointCloudMap map;
  FlatState start;
  PartialGoal goal;
  PlannerConfig config;  // recommended planner settings
};

namespace detail {

// Portable uniform draw in [0, 1): std distributions differ across libraries.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Grid coordinates lo, lo + s, ... up to hi (hi included when on the grid).
inline std::vector<double> grid_axis(double lo, double hi, double s) {
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((hi - lo) / s + 1e-9));
  for (long k = 0; k <= n; ++k) out.push_back(lo + static_cast<double>(k) * s);
  return out;
}

// Samples outward from the slot edge so the edges +-w/2 are exact points.
inline std::vector<double> slotted_axis(double half_gap, double reach, double s) {
  std::vector<double> out;
  for (double y : grid_axis(half_gap, reach, s)) {
    if (y != 0.0) out.push_back(-y);
    out.push_back(y);
  }
  return out;
}

inline PlannerConfig base_config(const ScenarioSpec& spec) {
  PlannerConfig cfg;
  cfg.robot = spec.robot;
  cfg.axes = spec.axes;
  cfg.workspace.lo = -spec.half_extent;
  cfg.workspace.hi = spec.half_extent;
  // control steps of g/4 in acceleration per tau
  cfg.tau = 0.2;
  cfg.rho = 1e4;
  cfg.u_max = 5.0 * kGravity;
  cfg.du = cfg.u_max / 4.0;
  cfg.j_max = Vec3::Constant(cfg.u_max);
  cfg.a_max = Vec3::Constant(kGravity);
  cfg.v_max = Vec3::Constant(7.0);
  cfg.samples = 40;
  // coarse merging keeps the gap and window searches at seconds; one
  // acceleration step per quantum
  cfg.quantum = {0.25, kGravity / 10.0, cfg.du * cfg.tau};
  cfg.goal_tol = {0.3, 0.5, 0.5};
  return cfg;
}

inline void set_endpoints(Scenario& sc, double margin) {
  const double x = sc.spec.half_extent.x() - margin;
  sc.start = FlatState(Vec3(-x, 0.0, 0.0));
  sc.goal = PartialGoal(Vec3(x, 0.0, 0.0));
}

}  // namespace detail

/// Deterministic environment for `spec`; throws SpecInvalid.
inline Scenario generate(const ScenarioSpec& spec) {
  spec.validate();
  Scenario sc;
  sc.spec = spec;
  sc.config = detail::base_config(spec);
  detail::set_endpoints(sc, 0.5);
  const double s = spec.spacing;
  const Vec3 reach = spec.half_extent + Vec3::Constant(kWallMargin);
  std::vector<Vec3> pts;

  switch (spec.kind) {
    case ScenarioKind::kWallGap: {
      for (double y : detail::slotted_axis(spec.gap_width / 2.0, reach.y(), s))
        for (double z : detail::grid_axis(-reach.z(), reach.z(), s)) pts.emplace_back(0.0, y, z);
      break;
    }
    case ScenarioKind::kTiltedWindow: {
      // grid laid out in the window frame (u along the long side, w across),
      // so the aperture edges are sampled exactly
      const double t = spec.tilt_deg * std::numbers::pi / 180.0;
      const Vec3 u_dir(0.0, std::cos(t), std::sin(t));
      const Vec3 w_dir(0.0, -std::sin(t), std::cos(t));
      const double hu = spec.window_h / 2.0;
      const double hw = spec.window_w / 2.0;
      const double span = reach.tail<2>().norm();
      for (double a : detail::slotted_axis(0.0, span, s)) {
        for (double b : detail::slotted_axis(0.0, span, s)) {
          if (std::abs(a) < hu && std::abs(b) < hw) continue;
          const Vec3 q = a * u_dir + b * w_dir;
          if (std::abs(q.y()) > reach.y() || std::abs(q.z()) > reach.z()) continue;
          pts.push_back(q);
        }
      }
      // the aperture rim itself
      for (double a : detail::slotted_axis(0.0, hu, s)) {
        pts.push_back(a * u_dir + hw * w_dir);
        pts.push_back(a * u_dir - hw * w_dir);
      }
      for (double b : detail::slotted_axis(0.0, hw, s)) {
        pts.push_back(hu * u_dir + b * w_dir);
        pts.push_back(-hu * u_dir + b * w_dir);
      }
      sc.config.axes = PlanAxes::k3D;
      break;
    }
    case ScenarioKind::kCorridor: {
      const double y = spec.corridor_width / 2.0;
      for (double x : detail::grid_axis(-reach.x(), reach.x(), s))
        for (double z : detail::grid_axis(-reach.z(), reach.z(), s)) {
          pts.emplace_back(x, -y, z);
          pts.emplace_back(x, y, z);
        }
      // keep the workspace between the walls
      sc.config.workspace.lo.y() = std::max(sc.config.workspace.lo.y(), -y);
      sc.config.workspace.hi.y() = std::min(sc.config.workspace.hi.y(), y);
      break;
    }
    case ScenarioKind::kRandomClutter: {
      // vertical pillars in the middle band, clear of start and goal
      std::mt19937_64 rng(spec.seed);
      const double band = std::max(spec.half_extent.x() - 1.0, 0.0);
      const double ring = 2.0 * std::numbers::pi * spec.pillar_radius;
      const int around = std::max(8, static_cast<int>(std::ceil(ring / s)));
      for (int k = 0; k < spec.obstacles; ++k) {
        const double cx = (2.0 * detail::unit_draw(rng) - 1.0) * band;
        const double cy = (2.0 * detail::unit_draw(rng) - 1.0) * spec.half_extent.y();
        for (double z : detail::grid_axis(-reach.z(), reach.z(), s)) {
          for (int j = 0; j < around; ++j) {
            const double th = 2.0 * std::numbers::pi * j / around;
            pts.emplace_back(cx + spec.pillar_radius * std::cos(th),
                             cy + spec.pillar_radius * std::sin(th), z);
          }
        }
      }
      break;
    }
  }
  // 3-D lattices are ~9x wider; inflate the heuristic to keep them tractable
  if (sc.config.axes == PlanAxes::k3D) sc.config.heuristic_weight = 3.0;
  sc.map = PointCloudMap(std::move(pts));
  return sc;
}

}  // namespace kinoplan

#endif  // KINOPLAN_SCENARIOS_HPP
