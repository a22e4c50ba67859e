#pragma once

#include <cmath>
#include <optional>

#include "navcon/world/geometry.hpp"
#include "navcon/world/robot.hpp"
#include "navcon/world/scene.hpp"

namespace navcon::world {

/// A camera placed in the world. Camera axes: forward, left, up.
struct CameraPose {
  Vec3 origin;
  double yaw = 0.0;

  [[nodiscard]] Vec3 forward() const { return {std::cos(yaw), std::sin(yaw), 0.0}; }
  [[nodiscard]] Vec3 left() const { return {-std::sin(yaw), std::cos(yaw), 0.0}; }
  [[nodiscard]] static Vec3 up() { return {0.0, 0.0, 1.0}; }

  /// Point in camera coordinates (forward, left, up).
  [[nodiscard]] Vec3 to_camera(Vec3 p) const {
    const Vec3 d = p - origin;
    return {dot(d, forward()), dot(d, left()), d.z};
  }
};

inline CameraPose camera_pose(const CameraModel& cam, const Pose2& robot, double ground_z) {
  return {{robot.x, robot.y, ground_z + cam.mount_height}, robot.yaw + cam.yaw_offset};
}

struct PixelHit {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;  // distance along the optical axis
};

/// Pinhole projection with bottom-origin v. Empty when the point is not in front of the camera.
inline std::optional<PixelHit> project_point(const CameraModel& cam, const CameraPose& pose, Vec3 p,
                                             double near = 1e-6) {
  const Vec3 c = pose.to_camera(p);
  if (c.x <= near) return std::nullopt;
  return PixelHit{cam.cx() - cam.fx() * c.y / c.x, cam.cy() + cam.fy() * c.z / c.x, c.x};
}

/// Unit world-space direction through pixel (u, v), bottom-origin v.
inline Vec3 pixel_direction(const CameraModel& cam, const CameraPose& pose, double u, double v) {
  const double lateral = -(u - cam.cx()) / cam.fx();
  const double vertical = (v - cam.cy()) / cam.fy();
  return (pose.forward() + pose.left() * lateral + CameraPose::up() * vertical).normalized();
}

}  // namespace navcon::world
