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

#ifndef KINOPLAN_KDTREE_HPP
#define KINOPLAN_KDTREE_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "kinoplan/types.hpp"

namespace kinoplan {

/// Static balanced 3-d tree over a point set. Immutable after construction.
class KdTree {
 public:
  static constexpr std::size_t kLeafSize = 8;

  KdTree() = default;
  explicit KdTree(const std::vector<Vec3>* points) : points_(points) {
    index_.resize(points_->size());
    std::iota(index_.begin(), index_.end(), 0u);
    if (!index_.empty()) build(0, static_cast<std::uint32_t>(index_.size()));
  }

  /// Calls `visit(i)` for every point within `radius` of `center`
  /// (inclusive). Stops early when `visit` returns true; returns whether it did.
  template <typename Visit>
  bool for_each_in_radius(const Vec3& center, double radius, Visit&& visit) const {
    if (nodes_.empty()) return false;
    return search(0, center, radius * radius, radius, visit);
  }

  std::vector<std::size_t> radius_query(const Vec3& center, double radius) const {
    std::vector<std::size_t> out;
    for_each_in_radius(center, radius, [&](std::size_t i) {
      out.push_back(i);
      return false;
    });
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t size() const { return index_.size(); }

 private:
  struct Node {
    std::uint32_t begin = 0, end = 0;  // range into index_
    std::int32_t left = -1, right = -1;
    int axis = -1;                     // -1 for leaves
    double split = 0.0;
    Vec3 lo, hi;                       // bounding box of the subtree
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (std::uint32_t k = begin; k < end; ++k) {
      lo = lo.cwiseMin((*points_)[index_[k]]);
      hi = hi.cwiseMax((*points_)[index_[k]]);
    }
    Node node;
    node.begin = begin;
    node.end = end;
    node.lo = lo;
    node.hi = hi;
    if (end - begin > kLeafSize) {
      int axis = 0;
      (hi - lo).maxCoeff(&axis);
      const std::uint32_t mid = begin + (end - begin) / 2;
      std::nth_element(index_.begin() + begin, index_.begin() + mid, index_.begin() + end,
                       [&](std::uint32_t a, std::uint32_t b) {
                         return (*points_)[a][axis] < (*points_)[b][axis];
                       });
      node.axis = axis;
      node.split = (*points_)[index_[mid]][axis];
      node.left = build(begin, mid);
      node.right = build(mid, end);
    }
    nodes_[id] = node;
    return id;
  }

  template <typename Visit>
  bool search(std::int32_t id, const Vec3& c, double r2, double r, Visit& visit) const {
    const Node& n = nodes_[id];
    // squared distance from c to the node box
    const Vec3 gap = (n.lo - c).cwiseMax(c - n.hi).cwiseMax(0.0);
    if (gap.squaredNorm() > r2) return false;
    if (n.axis < 0) {
      for (std::uint32_t k = n.begin; k < n.end; ++k) {
        const std::uint32_t i = index_[k];
        if (((*points_)[i] - c).squaredNorm() <= r2 && visit(static_cast<std::size_t>(i)))
          return true;
      }
      return false;
    }
    const bool left_first = c[n.axis] < n.split;
    const std::int32_t first = left_first ? n.left : n.right;
    const std::int32_t second = left_first ? n.right : n.left;
    if (search(first, c, r2, r, visit)) return true;
    return search(second, c, r2, r, visit);
  }

  const std::vector<Vec3>* points_ = nullptr;
  std::vector<std::uint32_t> index_;
  std::vector<Node> nodes_;
};

}  // namespace kinoplan

#endif  // KINOPLAN_KDTREE_HPP
