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

// Attitude-aware collision checking of an ellipsoidal body against a point
// cloud. The body at a state is {E q + d : |q| <= 1} with E = R diag(r,r,h) R^T
// and R the thrust-aligned attitude of the state's acceleration.

#ifndef KINOPLAN_COLLISION_HPP
#define KINOPLAN_COLLISION_HPP

#include <memory>
#include <utility>
#include <vector>

#include "kinoplan/flatness.hpp"
#include "kinoplan/kdtree.hpp"
#include "kinoplan/primitive.hpp"

namespace kinoplan {

/// Obstacle points with a radius-query index. Copies share the same
/// immutable storage.
class PointCloudMap {
 public:
  PointCloudMap() : data_(std::make_shared<Data>(std::vector<Vec3>{})) {}
  explicit PointCloudMap(std::vector<Vec3> points) {
    for (const auto& p : points)
      if (!p.allFinite()) throw NonFiniteError("point cloud: non-finite point");
    data_ = std::make_shared<Data>(std::move(points));
  }

  const std::vector<Vec3>& points() const { return data_->points; }
  const KdTree& index() const { return data_->tree; }
  std::size_t size() const { return data_->points.size(); }
  bool empty() const { return data_->points.empty(); }

  /// Axis-aligned bounding box of the points (unbounded when empty).
  Box bounds() const { return data_->bounds; }

  template <typename Visit>
  bool for_each_in_radius(const Vec3& c, double radius, Visit&& visit) const {
    return data_->tree.for_each_in_radius(c, radius, std::forward<Visit>(visit));
  }

  std::vector<std::size_t> radius_query(const Vec3& c, double radius) const {
    return data_->tree.radius_query(c, radius);
  }

 private:
  struct Data {
    explicit Data(std::vector<Vec3> pts) : points(std::move(pts)), tree(&points) {
      if (!points.empty()) {
        bounds.lo = bounds.hi = points.front();
        for (const auto& p : points) {
          bounds.lo = bounds.lo.cwiseMin(p);
          bounds.hi = bounds.hi.cwiseMax(p);
        }
      }
    }
    Data(const Data&) = delete;
    Data& operator=(const Data&) = delete;

    std::vector<Vec3> points;
    KdTree tree;
    Box bounds;
  };

  std::shared_ptr<const Data> data_;
};

/// Body ellipsoid {E q + d : |q| <= 1}. Because the body is a spheroid about
/// its thrust axis r3, membership only needs r3:
///   |o - d|^2 / r^2 + (r3 . (o - d))^2 (1/h^2 - 1/r^2) <= 1.
inline bool spheroid_contains(const Vec3& q, const Vec3& axis, double inv_r2, double axial_gain) {
  const double z = axis.dot(q);
  return q.squaredNorm() * inv_r2 + z * z * axial_gain <= 1.0;
}

struct EllipsoidPose {
  Mat3 E;      // R diag(r, r, h) R^T
  Mat3 E_inv;  // R diag(1/r, 1/r, 1/h) R^T
  Vec3 d;
  Vec3 axis = Vec3::UnitZ();  // r3
  double inv_r2 = 1.0;
  double axial_gain = 0.0;    // 1/h^2 - 1/r^2

  bool contains(const Vec3& o) const { return spheroid_contains(o - d, axis, inv_r2, axial_gain); }
};

inline EllipsoidPose ellipsoid_from_rotation(const Mat3& R, const Vec3& center,
                                             const RobotGeometry& geom) {
  EllipsoidPose pose;
  const Vec3 axes(geom.r, geom.r, geom.h);
  pose.E = R * axes.asDiagonal() * R.transpose();
  pose.E_inv = R * axes.cwiseInverse().asDiagonal() * R.transpose();
  pose.d = center;
  pose.axis = R.col(2);
  pose.inv_r2 = 1.0 / (geom.r * geom.r);
  pose.axial_gain = 1.0 / (geom.h * geom.h) - pose.inv_r2;
  return pose;
}

inline EllipsoidPose ellipsoid_at(const FlatState& s, const RobotGeometry& geom, double yaw = 0.0,
                                  double g = kGravity) {
  return ellipsoid_from_rotation(desired_rotation(desired_force(s.a, g), yaw), s.p, geom);
}

/// True iff some point within `crop_r` of the center lies inside the body.
/// `crop_r` must be at least the largest semi-axis.
inline bool pose_collides(const EllipsoidPose& pose, const PointCloudMap& map, double crop_r) {
  const auto& pts = map.points();
  return map.for_each_in_radius(pose.d, crop_r,
                                [&](std::size_t i) { return pose.contains(pts[i]); });
}

struct CollisionParams {
  RobotGeometry geom;
  int samples = 10;
  double yaw = 0.0;
  double g = kGravity;
  Box workspace;  // sampled centers must stay inside

  static CollisionParams from_config(const PlannerConfig& cfg) {
    return {cfg.robot, cfg.samples, cfg.yaw, cfg.g, cfg.workspace};
  }
};

/// Samples `samples` states at t_i = i tau / (samples - 1) and reports whether
/// any sampled body pose hits the map or leaves the workspace. States with an
/// undefined attitude count as collisions.
inline bool primitive_collides(const MotionPrimitive& prim, const PointCloudMap& map,
                               const CollisionParams& params) {
  const int n = std::max(params.samples, 2);
  const double crop = std::max(params.geom.r, params.geom.h);
  const double inv_r2 = 1.0 / (params.geom.r * params.geom.r);
  const double axial_gain = 1.0 / (params.geom.h * params.geom.h) - inv_r2;
  const Vec3 heading = heading_axis(params.yaw);
  const auto& pts = map.points();
  for (int i = 0; i < n; ++i) {
    const double t = prim.tau * static_cast<double>(i) / static_cast<double>(n - 1);
    const FlatState s = prim.eval(t);
    if (!params.workspace.contains(s.p)) return true;
    // same conditions as desired_rotation(); only the thrust axis is needed
    const Vec3 f = desired_force(s.a, params.g);
    const double fn = f.norm();
    if (!(fn > kThrustEpsilon)) return true;
    const Vec3 axis = f / fn;
    if (!(heading.cross(axis).norm() > kThrustEpsilon)) return true;
    const bool hit = map.for_each_in_radius(s.p, crop, [&](std::size_t k) {
      return spheroid_contains(pts[k] - s.p, axis, inv_r2, axial_gain);
    });
    if (hit) return true;
  }
  return false;
}

inline bool primitive_collides(const MotionPrimitive& prim, const PointCloudMap& map,
                               const RobotGeometry& geom, int samples, double yaw = 0.0,
                               double g = kGravity) {
  CollisionParams params;
  params.geom = geom;
  params.samples = samples;
  params.yaw = yaw;
  params.g = g;
  return primitive_collides(prim, map, params);
}

}  // namespace kinoplan

#endif  // KINOPLAN_COLLISION_HPP
