#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "navcon/projection/panorama.hpp"
#include "navcon/projection/raycast.hpp"
#include "navcon/world/camera.hpp"
#include "navcon/world/robot.hpp"
#include "navcon/world/scene.hpp"

namespace navcon::projection {

/// Angular perturbation applied to projection rays (camera-to-map misalignment).
struct CalibrationNoise {
  double yaw_rad = 0.0;
  double pitch_rad = 0.0;
};

inline Vec3 perturb(Vec3 d, const CalibrationNoise& noise) {
  if (noise.yaw_rad == 0.0 && noise.pitch_rad == 0.0) return d;
  const double yaw = std::atan2(d.y, d.x) + noise.yaw_rad;
  const double pitch = std::atan2(d.z, d.horizontal_norm()) + noise.pitch_rad;
  return {std::cos(pitch) * std::cos(yaw), std::cos(pitch) * std::sin(yaw), std::sin(pitch)};
}

/// Ray through a pixel of a camera frame or of the panorama, from the camera's optical center.
inline Ray pixel_to_ray(double u, double v, std::string_view frame, const world::RobotState& robot,
                        const world::SceneSpec& scene, const PanoramaLayout& layout = {},
                        const CalibrationNoise& noise = {}) {
  std::string frame_name(frame);
  double local_u = u;
  if (frame == "panorama") {
    const auto local = layout.decompose(u);
    if (!local) throw GeometryError("unmapped panorama column");
    frame_name = layout.order[local->slot];
    local_u = local->u;
  }
  const auto idx = scene.cameras.index_of(frame_name);
  if (!idx) throw GeometryError("unknown camera frame: " + frame_name);
  const auto& cam = scene.cameras.cameras[*idx];
  if (local_u < 0 || local_u > cam.width || v < 0 || v > cam.height)
    throw GeometryError("pixel outside view " + frame_name);
  const double ground = scene.terrain.height_at(robot.pose.x, robot.pose.y);
  const auto pose = world::camera_pose(cam, robot.pose, ground);
  return {pose.origin, perturb(world::pixel_direction(cam, pose, local_u, v), noise)};
}

struct Waypoint {
  enum class Status { Hit, MapBoundary };
  Vec3 position;
  Status status = Status::MapBoundary;
  std::optional<VoxelIndex> hit_voxel;
  double standoff_applied = 0.0;
  bool clamped = false;  // pullback left the map and was pulled back inside

  [[nodiscard]] bool hit() const { return status == Status::Hit; }
};

inline const char* to_string(Waypoint::Status s) {
  return s == Waypoint::Status::Hit ? "hit" : "map-boundary";
}

/// Top of the highest occupied voxel at or below height z in the column under (x, y).
inline double support_below(const VoxelMap& map, double x, double y, double z) {
  const auto col = map.index_of({x, y, 0.0});
  const double res = map.resolution();
  int k = std::min(map.dims()[2] - 1, static_cast<int>(std::floor(z / res + 1e-9)));
  for (; k >= 0; --k)
    if (map.occupied(col.x, col.y, k)) return (k + 1) * res;
  return 0.0;
}

/// Turns a ray-cast result into an approach waypoint `standoff` meters short of the hit.
inline Waypoint emplace_waypoint(const RaycastResult& hit, const Ray& ray, const VoxelMap& map,
                                 double standoff = 0.75) {
  Waypoint wp;
  if (!hit.hit()) {
    wp.status = Waypoint::Status::MapBoundary;
    wp.position = hit.point;
    return wp;
  }
  wp.status = Waypoint::Status::Hit;
  wp.hit_voxel = hit.voxel;
  const double h = ray.direction.horizontal_norm();
  Vec3 p = hit.point;
  if (h > 1e-12 && standoff > 0.0) {
    p.x -= ray.direction.x / h * standoff;
    p.y -= ray.direction.y / h * standoff;
  }
  const Vec3 e = map.extent();
  const double margin = map.resolution() / 2;
  const Vec3 before = p;
  p.x = std::clamp(p.x, margin, e.x - margin);
  p.y = std::clamp(p.y, margin, e.y - margin);
  wp.clamped = p.x != before.x || p.y != before.y;
  wp.standoff_applied = std::hypot(p.x - hit.point.x, p.y - hit.point.y);
  // Column on the approach side of the face, sampled from just above the entry point.
  double qx = p.x, qy = p.y;
  if (h > 1e-12) {
    qx -= ray.direction.x / h * 1e-9;
    qy -= ray.direction.y / h * 1e-9;
  }
  p.z = support_below(map, std::clamp(qx, 0.0, e.x), std::clamp(qy, 0.0, e.y), hit.point.z + 1e-9);
  wp.position = p;
  return wp;
}

}  // namespace navcon::projection
