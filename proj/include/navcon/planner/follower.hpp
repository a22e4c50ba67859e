#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "navcon/planner/planner.hpp"
#include "navcon/world/robot.hpp"

namespace navcon::planner {

struct FollowerConfig {
  double lookahead = 0.6;
  double speed = 1.0;
  double dt = 0.05;
  double success_radius = 0.3;
  double stop_radius = 0.1;
  double min_speed = 0.25;
};

struct FollowResult {
  world::RobotState final_state;
  bool success = false;
  double sim_time = 0.0;
  double time_budget = 0.0;
  std::vector<world::Pose2> trajectory;
};

namespace detail {

inline double wrap_angle(double a) {
  while (a > std::numbers::pi) a -= 2 * std::numbers::pi;
  while (a < -std::numbers::pi) a += 2 * std::numbers::pi;
  return a;
}

// First point along the polyline, from segment `seg` on, at least `l` away from (x, y).
inline std::pair<double, double> lookahead_point(const std::vector<Vec3>& pts, std::size_t& seg, double x, double y,
                                                 double l) {
  for (std::size_t i = seg; i + 1 < pts.size(); ++i) {
    const double ax = pts[i].x, ay = pts[i].y, bx = pts[i + 1].x, by = pts[i + 1].y;
    const double dx = bx - ax, dy = by - ay;
    const double fx = ax - x, fy = ay - y;
    const double a = dx * dx + dy * dy;
    if (a <= 0.0) continue;
    const double b = 2 * (fx * dx + fy * dy);
    const double c = fx * fx + fy * fy - l * l;
    const double disc = b * b - 4 * a * c;
    if (disc < 0.0) continue;
    const double t = (-b + std::sqrt(disc)) / (2 * a);
    if (t >= 0.0 && t <= 1.0) {
      seg = i;
      return {ax + t * dx, ay + t * dy};
    }
  }
  seg = pts.size() >= 2 ? pts.size() - 2 : 0;
  return {pts.back().x, pts.back().y};
}

}  // namespace detail

/// Pure-pursuit tracking of a planned path with the unicycle model.
inline FollowResult follow_path(const PlannedPath& path, world::RobotState robot, const FollowerConfig& cfg = {}) {
  if (path.waypoints.empty()) throw Error("follow_path: empty path");
  FollowResult out;
  const auto& pts = path.waypoints;
  const Vec3 end = pts.back();
  const double speed = std::min(cfg.speed, robot.speed_limit);
  out.time_budget = 3 * (path.cost / speed) + 10.0;
  out.trajectory.push_back(robot.pose);
  std::size_t seg = 0;
  auto to_end = [&] { return std::hypot(end.x - robot.pose.x, end.y - robot.pose.y); };
  while (to_end() > cfg.stop_radius && out.sim_time + cfg.dt <= out.time_budget + 1e-9) {
    const auto [tx, ty] = detail::lookahead_point(pts, seg, robot.pose.x, robot.pose.y, cfg.lookahead);
    const double ld = std::hypot(tx - robot.pose.x, ty - robot.pose.y);
    const double alpha = detail::wrap_angle(std::atan2(ty - robot.pose.y, tx - robot.pose.x) - robot.pose.yaw);
    world::VelocityCommand cmd;
    if (std::abs(alpha) > std::numbers::pi / 2) {
      cmd.angular = std::copysign(robot.angular_limit, alpha);
    } else {
      double v = std::clamp(2 * to_end(), cfg.min_speed, speed);
      const double kappa = ld > 0.0 ? 2 * std::sin(alpha) / ld : 0.0;
      double w = v * kappa;
      if (std::abs(w) > robot.angular_limit) {
        w = std::copysign(robot.angular_limit, w);
        v = robot.angular_limit / std::abs(kappa);
      }
      cmd = {v, w};
    }
    robot = world::step_robot(robot, cmd, cfg.dt);
    out.sim_time += cfg.dt;
    out.trajectory.push_back(robot.pose);
  }
  out.final_state = robot;
  out.success = to_end() <= cfg.success_radius;
  return out;
}

}  // namespace navcon::planner
