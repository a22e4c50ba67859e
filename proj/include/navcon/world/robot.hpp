#pragma once

#include <cmath>

#include "navcon/error.hpp"
#include "navcon/world/scene.hpp"

namespace navcon::world {

struct RobotState {
  Pose2 pose;
  Footprint footprint;
  double speed_limit = 1.0;    // m/s
  double angular_limit = 2.0;  // rad/s

  static RobotState at_start(const SceneSpec& scene) {
    return {scene.robot_start, scene.robot, scene.speed_limit, 2.0};
  }
};

struct VelocityCommand {
  double linear = 0.0;   // m/s
  double angular = 0.0;  // rad/s
};

/// Unicycle integration over dt with the command held constant (exact arc).
inline RobotState step_robot(RobotState state, VelocityCommand cmd, double dt) {
  if (!(dt > 0.0)) throw Error("step_robot: dt must be positive");
  constexpr double slack = 1e-9;
  if (std::abs(cmd.linear) > state.speed_limit + slack ||
      std::abs(cmd.angular) > state.angular_limit + slack)
    throw Error("step_robot: command exceeds speed limits");
  auto& p = state.pose;
  const double turn = cmd.angular * dt;
  if (std::abs(turn) < 1e-12) {
    p.x += cmd.linear * std::cos(p.yaw) * dt;
    p.y += cmd.linear * std::sin(p.yaw) * dt;
  } else {
    const double r = cmd.linear / cmd.angular;
    p.x += r * (std::sin(p.yaw + turn) - std::sin(p.yaw));
    p.y -= r * (std::cos(p.yaw + turn) - std::cos(p.yaw));
  }
  p.yaw += turn;
  return state;
}

}  // namespace navcon::world
