#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <memory>
#include <sstream>

#include "navcon/lang/lang.hpp"
#include "navcon/pipeline/codegen.hpp"
#include "navcon/pipeline/command.hpp"
#include "navcon/planner/follower.hpp"
#include "navcon/projection/raycast.hpp"
#include "navcon/runtime/runtime.hpp"
#include "navcon/world/render.hpp"
#include "navcon/world/world.hpp"

namespace navcon::pipeline {

struct PipelineConfig {
  CodegenConfig codegen;
  StageThresholds thresholds;
  std::uint64_t seed = 0;
  runtime::ExecutionOptions execution;
  double standoff = 0.75;
  projection::CalibrationNoise calibration;
  planner::FollowerConfig follower;
  double event_period = 0.1;  // simulated seconds between follow events
};

/// One robot in one world; commands run against its current pose.
struct Session {
  world::World world;
  world::RobotState robot;

  explicit Session(world::World w) : world(std::move(w)), robot(world::RobotState::at_start(*world.scene)) {}

  void reset() { robot = world::RobotState::at_start(*world.scene); }
};

/// Robot pose sample published while a path is followed.
struct FollowEvent {
  world::Pose2 pose;
  double progress = 0.0;  // share of the trajectory completed, 0..1
  double sim_time = 0.0;
  bool done = false;
  bool success = false;
};

using FollowObserver = std::function<void(const FollowEvent&)>;

namespace detail {

inline std::string fixed2(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(2) << v;
  return ss.str();
}

// Horizontal gap from a point to an object's footprint rectangle; zero inside it.
inline double footprint_distance(const world::Vec3& p, const world::Box3& box) {
  const double dx = std::max({box.min.x - p.x, 0.0, p.x - box.max.x});
  const double dy = std::max({box.min.y - p.y, 0.0, p.y - box.max.y});
  return std::hypot(dx, dy);
}

// Where the target is drawn in the view the result refers to.
inline std::vector<world::Box2> target_boxes(const world::ViewSet& views, const projection::PanoramaLayout& layout,
                                             std::string_view frame, std::string_view target) {
  std::vector<world::Box2> out;
  auto collect = [&](std::string_view name, double dx) {
    const auto idx = views.frame_index(name);
    if (!idx) return;
    for (const auto& r : views.frames[*idx].rects)
      if (r.object_id == target) out.push_back(r.box.translated(dx, 0.0));
  };
  if (frame == "panorama") {
    for (std::size_t slot = 0; slot < layout.order.size(); ++slot) collect(layout.order[slot], layout.offset(slot));
  } else {
    collect(frame, 0.0);
  }
  return out;
}

class StageClock {
 public:
  explicit StageClock(std::map<std::string, double>& sink) : sink_(sink) {}
  void lap(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    sink_[stage] = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
  }

 private:
  std::map<std::string, double>& sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline void skip_after(StageOutcomes& s, int failed_stage) {
  auto all = std::array<StageOutcome*, 4>{&s.code, &s.od, &s.wp, &s.path_exec};
  for (int i = failed_stage + 1; i < 4; ++i) *all[static_cast<std::size_t>(i)] = {false, "skipped: earlier stage failed"};
}

}  // namespace detail

/// Runs one command through code generation, execution, detection check, projection, planning and
/// following. Every failure becomes a stage outcome; the session pose moves only on success.
inline CommandReport run_command(const NavCommand& cmd, Session& session, const PipelineConfig& cfg,
                                 const FollowObserver& observer = {}) {
  CommandReport rep;
  rep.command = cmd;
  rep.start_pose = session.robot.pose;
  rep.final_pose = session.robot.pose;
  auto& st = rep.stages;
  detail::StageClock clock(rep.timings_ms);
  const auto& scene = *session.world.scene;
  const auto& map = *session.world.map;

  // Code
  const auto gen = generate_program(cmd, cfg.codegen);
  if (!gen.program) {
    st.code = {false, gen.error};
    detail::skip_after(st, 0);
    clock.lap("code");
    return rep;
  }
  rep.program = *gen.program;
  lang::NavAst ast;
  try {
    ast = lang::parse_program(*gen.program);
  } catch (const Error& e) {
    st.code = {false, std::string("syntax error: ") + e.what()};
    detail::skip_after(st, 0);
    clock.lap("code");
    return rep;
  }
  auto views = std::make_shared<world::ViewSet>(world::render_views(scene, map, session.robot));
  const projection::PanoramaLayout layout;
  const auto assembled = projection::assemble_representation(views, cmd.representation, layout);
  auto exec = runtime::execute_program(ast, scene, assembled, cfg.execution);
  rep.trace = std::move(exec.trace);
  rep.nav_result = exec.result;
  const auto& nav = *rep.nav_result;
  if (!nav.ok()) {
    st.code = {false, nav.error.value_or("no navigation result")};
    detail::skip_after(st, 0);
    clock.lap("code");
    return rep;
  }
  st.code = {true, std::string(runtime::kNavFunction)};
  clock.lap("code");

  // OD
  const world::SceneObject* target = cmd.target ? scene.find_object(*cmd.target) : nullptr;
  if (!cmd.target) {
    st.od = {false, "no target annotation"};
  } else if (target == nullptr) {
    st.od = {false, "unknown target object " + *cmd.target};
  } else if (!nav.frame) {
    st.od = {false, "result box matches no detection frame"};
  } else {
    double best = 0.0;
    for (const auto& b : detail::target_boxes(*views, layout, *nav.frame, target->id))
      best = std::max(best, world::iou(*nav.box, b));
    rep.od_iou = best;
    const bool pass = best >= cfg.thresholds.od_iou;
    st.od = {pass, "IoU " + detail::fixed2(best) + " with " + target->id + " in " + *nav.frame};
  }
  clock.lap("od");
  if (!st.od.pass) {
    detail::skip_after(st, 1);
    return rep;
  }

  // WP
  try {
    const auto ray = projection::pixel_to_ray(nav.inputs->first, nav.inputs->second, *nav.frame, session.robot, scene,
                                              layout, cfg.calibration);
    const auto hit = projection::raycast_first_hit(ray, map, views->frames.front().camera.max_range);
    rep.waypoint = projection::emplace_waypoint(hit, ray, map, cfg.standoff);
  } catch (const GeometryError& e) {
    st.wp = {false, e.what()};
  }
  if (rep.waypoint) {
    const double d = detail::footprint_distance(rep.waypoint->position, target->box);
    rep.wp_distance = d;
    if (!rep.waypoint->hit())
      st.wp = {false, "ray reached the map boundary"};
    else
      st.wp = {d <= cfg.thresholds.wp_distance, detail::fixed2(d) + " m from " + target->id};
  }
  clock.lap("wp");
  if (!st.wp.pass) {
    detail::skip_after(st, 2);
    return rep;
  }

  // Path&Exec
  const planner::ColumnIndex cols(map);
  const auto pcfg = planner::PlannerConfig::for_robot(scene.robot, cfg.seed);
  rep.path = planner::plan_from_robot(session.robot, rep.waypoint->position, cols, pcfg);
  if (!rep.path->reached_goal) {
    st.path_exec = {false, "no path to the waypoint after " + std::to_string(rep.path->replans) + " replans"};
    clock.lap("path_exec");
    return rep;
  }
  const auto follow = planner::follow_path(*rep.path, session.robot, cfg.follower);
  rep.follow_success = follow.success;
  rep.follow_time = follow.sim_time;
  if (observer) {
    const auto& traj = follow.trajectory;
    const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg.event_period / cfg.follower.dt)));
    const double denom = traj.size() > 1 ? static_cast<double>(traj.size() - 1) : 1.0;
    for (std::size_t i = stride; i < traj.size(); i += stride)
      if (i + 1 < traj.size()) observer({traj[i], i / denom, i * cfg.follower.dt, false, false});
    observer({traj.back(), 1.0, follow.sim_time, true, follow.success});
  }
  if (follow.success) {
    session.robot = follow.final_state;
    st.path_exec = {true, "reached waypoint in " + detail::fixed2(follow.sim_time) + " s"};
  } else {
    st.path_exec = {false, "follower stopped short of the waypoint"};
  }
  rep.final_pose = session.robot.pose;
  clock.lap("path_exec");
  return rep;
}

}  // namespace navcon::pipeline
