#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "navcon/error.hpp"
#include "navcon/world/geometry.hpp"
#include "navcon/world/voxel_map.hpp"

namespace navcon::projection {

using world::Vec3;
using world::VoxelIndex;
using world::VoxelMap;

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length

  [[nodiscard]] Vec3 at(double t) const { return origin + direction * t; }
};

inline Ray make_ray(Vec3 origin, Vec3 direction) {
  const Vec3 d = direction.normalized();
  if (d.norm() == 0.0) throw GeometryError("ray direction must be non-zero");
  return {origin, d};
}

struct RaycastResult {
  enum class Status { Hit, Boundary };
  Status status = Status::Boundary;
  VoxelIndex voxel;  // meaningful for Hit
  Vec3 point;        // entry point on the hit voxel, or exit point on the map boundary
  double distance = 0.0;

  [[nodiscard]] bool hit() const { return status == Status::Hit; }
};

/// Parametric interval where the ray is inside `box`. Empty when it misses.
inline std::optional<std::pair<double, double>> ray_box_interval(const Ray& ray,
                                                                 const world::Box3& box) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    const double o = ray.origin[a];
    const double d = ray.direction[a];
    if (d == 0.0) {
      if (o < box.min[a] || o > box.max[a]) return std::nullopt;
      continue;
    }
    double ta = (box.min[a] - o) / d;
    double tb = (box.max[a] - o) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  if (t0 > t1) return std::nullopt;
  return std::make_pair(t0, t1);
}

namespace detail {

// Origins sitting exactly on a voxel boundary are moved off it so the start cell is unambiguous.
inline Vec3 nudge_origin(Vec3 o, double res) {
  for (int a = 0; a < 3; ++a) {
    const double cells = o[a] / res;
    if (std::abs(cells - std::round(cells)) < 1e-12) o[a] += 1e-9;
  }
  return o;
}

}  // namespace detail

/// Incremental grid traversal. Calls visit(voxel, t_enter) in exact crossing order until it
/// returns false, the ray leaves the map, or t_enter exceeds max_t. Returns the map exit t.
template <typename Visit>
double traverse_voxels(const Ray& input, const VoxelMap& map, double max_t, Visit&& visit) {
  if (!map.inside(input.origin)) throw GeometryError("ray origin outside map");
  const double res = map.resolution();
  const Ray ray{detail::nudge_origin(input.origin, res), input.direction};
  const world::Box3 bounds{{0, 0, 0}, map.extent()};
  const auto interval = ray_box_interval(ray, bounds);
  const double t_exit = interval ? std::max(0.0, interval->second) : 0.0;
  const double limit = std::min(t_exit, max_t);

  VoxelIndex cell = map.index_of(ray.origin);
  std::array<int, 3> step{};
  std::array<double, 3> t_max{};
  std::array<double, 3> t_delta{};
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    const double d = ray.direction[a];
    if (d > 0) {
      step[a] = 1;
      t_max[a] = ((cell[a] + 1) * res - ray.origin[a]) / d;
      t_delta[a] = res / d;
    } else if (d < 0) {
      step[a] = -1;
      t_max[a] = (cell[a] * res - ray.origin[a]) / d;
      t_delta[a] = -res / d;
    } else {
      step[a] = 0;
      t_max[a] = inf;
      t_delta[a] = inf;
    }
  }

  double t_enter = 0.0;
  const auto& dims = map.dims();
  while (t_enter <= limit) {
    if (!visit(cell, t_enter)) break;
    int axis = 0;
    if (t_max[1] < t_max[axis]) axis = 1;
    if (t_max[2] < t_max[axis]) axis = 2;
    if (t_max[axis] == inf) break;
    t_enter = t_max[axis];
    cell[axis] += step[axis];
    if (cell[axis] < 0 || cell[axis] >= dims[axis]) break;
    t_max[axis] += t_delta[axis];
  }
  return t_exit;
}

/// First occupied voxel along the ray, or the exit point on the map boundary.
inline RaycastResult raycast_first_hit(const Ray& ray, const VoxelMap& map, double max_range) {
  RaycastResult result;
  bool found = false;
  const double t_exit = traverse_voxels(ray, map, max_range, [&](VoxelIndex v, double t) {
    if (map.occupied(v)) {
      found = true;
      result.status = RaycastResult::Status::Hit;
      result.voxel = v;
      result.distance = t;
      result.point = ray.at(t);
      return false;
    }
    return true;
  });
  if (!found) {
    result.status = RaycastResult::Status::Boundary;
    result.distance = t_exit;
    result.point = ray.at(t_exit);
    // Snap onto the face the ray leaves through.
    const Vec3 e = map.extent();
    for (int a = 0; a < 3; ++a) result.point[a] = std::clamp(result.point[a], 0.0, e[a]);
  }
  return result;
}

}  // namespace navcon::projection
