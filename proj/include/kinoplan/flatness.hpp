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

// Flat outputs (acceleration, jerk, yaw) to thrust direction, attitude and
// body rates of a multirotor.

#ifndef KINOPLAN_FLATNESS_HPP
#define KINOPLAN_FLATNESS_HPP

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kinoplan/types.hpp"

namespace kinoplan {

inline constexpr double kThrustEpsilon = 1e-6;

class AttitudeError : public Error {
 public:
  enum class Kind { kDegenerateThrust, kSingularYaw };

  AttitudeError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct AttitudeSample {
  Vec3 f_d;  // mass-normalized force [m/s^2]
  Mat3 R;
  Vec3 w_d;  // body angular velocity [rad/s]
};

inline Vec3 desired_force(const Vec3& a, double g = kGravity) { return a + Vec3(0.0, 0.0, g); }

inline Vec3 heading_axis(double yaw) { return Vec3(-std::sin(yaw), std::cos(yaw), 0.0); }

inline Mat3 desired_rotation(const Vec3& f_d, double yaw, double eps = kThrustEpsilon) {
  const double fn = f_d.norm();
  if (!(fn > eps))
    throw AttitudeError(AttitudeError::Kind::kDegenerateThrust, "thrust norm below threshold");
  const Vec3 r3 = f_d / fn;
  const Vec3 c = heading_axis(yaw).cross(r3);
  const double cn = c.norm();
  if (!(cn > eps))
    throw AttitudeError(AttitudeError::Kind::kSingularYaw, "heading axis parallel to thrust");
  Mat3 R;
  R.col(0) = c / cn;
  R.col(2) = r3;
  R.col(1) = r3.cross(R.col(0));
  return R;
}

/// Time derivative of desired_rotation() along a trajectory with
/// d(f_d)/dt = jerk and the given yaw rate.
inline Mat3 rotation_derivative(const Vec3& f_d, const Vec3& jerk, const Mat3& R, double yaw = 0.0,
                                double yaw_rate = 0.0, double eps = kThrustEpsilon) {
  const double fn = f_d.norm();
  if (!(fn > eps))
    throw AttitudeError(AttitudeError::Kind::kDegenerateThrust, "thrust norm below threshold");
  const Vec3 r1 = R.col(0);
  const Vec3 r3 = R.col(2);
  const Vec3 r2c = heading_axis(yaw);
  const Vec3 r2c_dot = Vec3(-std::cos(yaw), -std::sin(yaw), 0.0) * yaw_rate;
  const double cn = r2c.cross(r3).norm();
  if (!(cn > eps))
    throw AttitudeError(AttitudeError::Kind::kSingularYaw, "heading axis parallel to thrust");

  const Vec3 r3_dot = r3.cross(jerk / fn).cross(r3);
  const Vec3 r1_dot = r1.cross((r2c_dot.cross(r3) + r2c.cross(r3_dot)) / cn).cross(r1);
  const Vec3 r2_dot = r3_dot.cross(r1) + r3.cross(r1_dot);

  Mat3 R_dot;
  R_dot << r1_dot, r2_dot, r3_dot;
  return R_dot;
}

/// Body angular velocity w with [w]x = R^T dR/dt.
inline Vec3 body_rates(const Vec3& f_d, const Vec3& jerk, const Mat3& R, double yaw = 0.0,
                       double yaw_rate = 0.0, double eps = kThrustEpsilon) {
  const Mat3 W = R.transpose() * rotation_derivative(f_d, jerk, R, yaw, yaw_rate, eps);
  return Vec3(W(2, 1), W(0, 2), W(1, 0));
}

inline AttitudeSample attitude(const Vec3& a, const Vec3& jerk, double yaw = 0.0,
                               double g = kGravity) {
  AttitudeSample s;
  s.f_d = desired_force(a, g);
  s.R = desired_rotation(s.f_d, yaw);
  s.w_d = body_rates(s.f_d, jerk, s.R, yaw);
  return s;
}

/// Z-Y-X Euler roll and pitch of `R`.
inline double roll_of(const Mat3& R) { return std::atan2(R(2, 1), R(2, 2)); }
inline double pitch_of(const Mat3& R) { return -std::asin(std::clamp(R(2, 0), -1.0, 1.0)); }

/// Largest roll reachable in planar flight with per-axis acceleration limit.
inline double roll_bound_2d(double a_max, double g = kGravity) { return std::atan(a_max / g); }

/// Largest roll when the vertical axis may also accelerate downward by a_max.
inline double roll_bound_3d(double a_max, double g = kGravity) {
  if (a_max >= g) return std::numbers::pi / 2.0;
  return std::atan(a_max / (g - a_max));
}

}  // namespace kinoplan

#endif  // KINOPLAN_FLATNESS_HPP
