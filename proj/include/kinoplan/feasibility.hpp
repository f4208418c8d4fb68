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

#ifndef KINOPLAN_FEASIBILITY_HPP
#define KINOPLAN_FEASIBILITY_HPP

#include <cmath>
#include <string>

#include "kinoplan/primitive.hpp"

namespace kinoplan {

// Absorbs round-off when a lattice value lands exactly on a bound.
inline constexpr double kBoundSlack = 1e-9;

struct DerivativeBounds {
  Vec3 v_max = Vec3::Constant(7.0);
  Vec3 a_max = Vec3::Constant(10.0);
  Vec3 j_max = Vec3::Constant(50.0);

  static DerivativeBounds from_config(const PlannerConfig& cfg) {
    return {cfg.v_max, cfg.a_max, cfg.j_max};
  }
};

enum class Derivative { kNone, kVelocity, kAcceleration, kJerk };

inline const char* derivative_name(Derivative d) {
  switch (d) {
    case Derivative::kVelocity: return "velocity";
    case Derivative::kAcceleration: return "acceleration";
    case Derivative::kJerk: return "jerk";
    default: return "none";
  }
}

struct DynamicVerdict {
  bool feasible = true;
  int axis = -1;
  Derivative derivative = Derivative::kNone;
  double value = 0.0;  // offending magnitude

  explicit operator bool() const { return feasible; }
};

namespace detail {

inline bool within(double x, double bound) { return std::abs(x) <= bound + kBoundSlack; }

// Peak |v| of v(t) = v0 + a0 t + u t^2 / 2 on [0, tau].
inline double peak_quadratic(double v0, double a0, double u, double tau) {
  double peak = std::max(std::abs(v0), std::abs(v0 + a0 * tau + 0.5 * u * tau * tau));
  if (u != 0.0) {
    const double ts = -a0 / u;
    if (ts > 0.0 && ts < tau) peak = std::max(peak, std::abs(v0 + a0 * ts + 0.5 * u * ts * ts));
  }
  return peak;
}

}  // namespace detail

/// Closed-form per-axis bound check of a primitive on [0, tau].
inline DynamicVerdict check_dynamic(const MotionPrimitive& prim, const DerivativeBounds& b) {
  DynamicVerdict out;
  auto fail = [&](int axis, Derivative d, double value) {
    out.feasible = false;
    out.axis = axis;
    out.derivative = d;
    out.value = value;
    return out;
  };
  const double tau = prim.tau;
  for (int i = 0; i < 3; ++i) {
    const double u = prim.u[i];
    const double v0 = prim.s0.v[i];
    const double a0 = prim.s0.a[i];
    switch (prim.order) {
      case 3: {
        if (!detail::within(u, b.j_max[i])) return fail(i, Derivative::kJerk, std::abs(u));
        const double a_peak = std::max(std::abs(a0), std::abs(a0 + u * tau));
        if (!detail::within(a_peak, b.a_max[i])) return fail(i, Derivative::kAcceleration, a_peak);
        const double v_peak = detail::peak_quadratic(v0, a0, u, tau);
        if (!detail::within(v_peak, b.v_max[i])) return fail(i, Derivative::kVelocity, v_peak);
        break;
      }
      case 2: {
        if (!detail::within(u, b.a_max[i])) return fail(i, Derivative::kAcceleration, std::abs(u));
        const double v_peak = std::max(std::abs(v0), std::abs(v0 + u * tau));
        if (!detail::within(v_peak, b.v_max[i])) return fail(i, Derivative::kVelocity, v_peak);
        break;
      }
      case 1:
        if (!detail::within(u, b.v_max[i])) return fail(i, Derivative::kVelocity, std::abs(u));
        break;
      default:
        throw ConfigError("check_dynamic: bad order");
    }
  }
  return out;
}

inline std::string describe(const DynamicVerdict& v) {
  if (v.feasible) return "feasible";
  return std::string(derivative_name(v.derivative)) + " bound violated on axis " +
         std::to_string(v.axis) + " (|value| = " + std::to_string(v.value) + ")";
}

}  // namespace kinoplan

#endif  // KINOPLAN_FEASIBILITY_HPP
