#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "navcon/projection/raycast.hpp"
#include "navcon/world/camera.hpp"
#include "navcon/world/geometry.hpp"
#include "navcon/world/robot.hpp"
#include "navcon/world/scene.hpp"
#include "navcon/world/voxel_map.hpp"

namespace navcon::world {

/// One object as seen by one camera.
struct ProjectedRect {
  std::string object_id;
  Box2 box;                      // clipped to the image, pixels
  double distance = 0.0;         // camera to closest point of the object, meters
  double visible_fraction = 1.0; // share of `box` not covered by nearer rectangles
  bool center_unoccluded = true; // first voxel hit through the box center belongs to the object
};

struct FrameView {
  CameraModel camera;
  CameraPose pose;
  std::vector<ProjectedRect> rects;

  [[nodiscard]] const std::string& name() const { return camera.name; }
  [[nodiscard]] Box2 bounds() const {
    return {0.0, 0.0, static_cast<double>(camera.width), static_cast<double>(camera.height)};
  }
};

/// Area of the union of rectangles, by coordinate compression.
inline double union_area(const std::vector<Box2>& boxes) {
  std::vector<double> xs, ys;
  for (const auto& b : boxes) {
    if (b.empty()) continue;
    xs.push_back(b.left);
    xs.push_back(b.right);
    ys.push_back(b.lower);
    ys.push_back(b.upper);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const double cx = (xs[i] + xs[i + 1]) / 2;
      const double cy = (ys[j] + ys[j + 1]) / 2;
      for (const auto& b : boxes)
        if (!b.empty() && b.contains(cx, cy)) {
          area += (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
          break;
        }
    }
  return area;
}

/// Image rectangle of a box after clipping at the near plane. Empty when fully behind.
inline std::optional<Box2> project_box(const CameraModel& cam, const CameraPose& pose,
                                       const Box3& box, double near = 0.05) {
  std::array<Vec3, 8> corners;
  for (int i = 0; i < 8; ++i)
    corners[static_cast<std::size_t>(i)] = {(i & 1) ? box.max.x : box.min.x,
                                            (i & 2) ? box.max.y : box.min.y,
                                            (i & 4) ? box.max.z : box.min.z};
  std::vector<Vec3> hull;
  std::array<double, 8> fwd{};
  for (std::size_t i = 0; i < 8; ++i) {
    fwd[i] = pose.to_camera(corners[i]).x;
    if (fwd[i] >= near) hull.push_back(corners[i]);
  }
  if (hull.empty()) return std::nullopt;
  if (hull.size() < 8) {
    // Edges join corners differing in exactly one bit.
    for (std::size_t i = 0; i < 8; ++i)
      for (int bit : {1, 2, 4}) {
        const std::size_t j = i ^ static_cast<std::size_t>(bit);
        if (j < i) continue;
        if ((fwd[i] - near) * (fwd[j] - near) < 0.0) {
          const double s = (near - fwd[i]) / (fwd[j] - fwd[i]);
          hull.push_back(corners[i] + (corners[j] - corners[i]) * s);
        }
      }
  }
  Box2 out{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : hull) {
    const auto px = project_point(cam, pose, p, 0.0);
    if (!px) continue;
    out.left = std::min(out.left, px->u);
    out.right = std::max(out.right, px->u);
    out.lower = std::min(out.lower, px->v);
    out.upper = std::max(out.upper, px->v);
  }
  if (!(out.right >= out.left)) return std::nullopt;
  return out;
}

/// Rendered camera views plus the geometry needed for per-pixel depth.
class ViewSet {
 public:
  std::array<FrameView, 3> frames;

  ViewSet() = default;
  ViewSet(std::array<FrameView, 3> f, std::shared_ptr<const std::vector<Box3>> geometry)
      : frames(std::move(f)), geometry_(std::move(geometry)) {}

  [[nodiscard]] std::optional<std::size_t> frame_index(std::string_view name) const {
    for (std::size_t i = 0; i < frames.size(); ++i)
      if (frames[i].name() == name) return i;
    return std::nullopt;
  }

  /// Optical-axis depth at (u, v) in frame `index`; max range when nothing is hit.
  [[nodiscard]] double depth_at(std::size_t index, double u, double v) const {
    const auto& f = frames[index];
    const double max_range = f.camera.max_range;
    if (!geometry_) return max_range;
    const projection::Ray ray{f.pose.origin, pixel_direction(f.camera, f.pose, u, v)};
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : *geometry_) {
      const auto iv = projection::ray_box_interval(ray, b);
      if (!iv || iv->second < 0.0) continue;
      best = std::min(best, std::max(0.0, iv->first));
    }
    if (!std::isfinite(best)) return max_range;
    return std::min(max_range, best * dot(ray.direction, f.pose.forward()));
  }

  /// Full raster for one frame, row-major with row = height - 1 - v (top row first).
  [[nodiscard]] std::vector<double> depth_raster(std::size_t index) const {
    const auto& cam = frames[index].camera;
    std::vector<double> out(static_cast<std::size_t>(cam.width) * cam.height);
    for (int row = 0; row < cam.height; ++row) {
      const int v = cam.height - 1 - row;
      for (int c = 0; c < cam.width; ++c)
        out[static_cast<std::size_t>(row) * cam.width + c] = depth_at(index, c + 0.5, v + 0.5);
    }
    return out;
  }

  [[nodiscard]] const std::vector<Box3>* geometry() const { return geometry_.get(); }

 private:
  std::shared_ptr<const std::vector<Box3>> geometry_;
};

inline std::shared_ptr<const std::vector<Box3>> scene_geometry(const SceneSpec& scene) {
  auto g = scene.terrain.solids(scene.extent);
  for (const auto& o : scene.objects) g.push_back(o.box);
  return std::make_shared<const std::vector<Box3>>(std::move(g));
}

inline FrameView render_frame(const SceneSpec& scene, const VoxelMap& map, const CameraModel& cam,
                              const CameraPose& pose) {
  FrameView view{cam, pose, {}};
  const Box2 image = view.bounds();
  for (const auto& obj : scene.objects) {
    const auto raw = project_box(cam, pose, obj.box);
    if (!raw) continue;
    const Box2 clipped = raw->intersect(image);
    if (clipped.empty()) continue;
    const double dist = (obj.box.clamp(pose.origin) - pose.origin).norm();
    if (dist > cam.max_range) continue;
    view.rects.push_back({obj.id, clipped, dist, 1.0, true});
  }
  // Stable front-to-back order; visibility is measured against strictly nearer rectangles.
  std::stable_sort(view.rects.begin(), view.rects.end(),
                   [](const ProjectedRect& a, const ProjectedRect& b) { return a.distance < b.distance; });
  for (std::size_t i = 0; i < view.rects.size(); ++i) {
    auto& r = view.rects[i];
    std::vector<Box2> covering;
    for (std::size_t j = 0; j < i; ++j)
      if (view.rects[j].distance < r.distance) covering.push_back(view.rects[j].box.intersect(r.box));
    const double area = r.box.area();
    r.visible_fraction = area > 0.0 ? std::clamp(1.0 - union_area(covering) / area, 0.0, 1.0) : 0.0;

    const auto* obj = scene.find_object(r.object_id);
    if (!map.inside(pose.origin)) {
      r.center_unoccluded = false;
      continue;
    }
    const projection::Ray ray{
        pose.origin,
        pixel_direction(cam, pose, r.box.horizontal_center(), r.box.vertical_center())};
    const auto hit = projection::raycast_first_hit(ray, map, cam.max_range);
    r.center_unoccluded = hit.hit() && map.voxel_box(hit.voxel).overlaps(obj->box);
  }
  return view;
}

/// Renders the three rig cameras at the robot pose.
inline ViewSet render_views(const SceneSpec& scene, const VoxelMap& map, const RobotState& robot) {
  const double ground = scene.terrain.height_at(robot.pose.x, robot.pose.y);
  std::array<FrameView, 3> frames;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& cam = scene.cameras.cameras[i];
    frames[i] = render_frame(scene, map, cam, camera_pose(cam, robot.pose, ground));
  }
  return ViewSet(std::move(frames), scene_geometry(scene));
}

}  // namespace navcon::world
