#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "navcon/error.hpp"
#include "navcon/planner/planner.hpp"
#include "navcon/projection/panorama.hpp"
#include "navcon/projection/waypoint.hpp"
#include "navcon/runtime/result.hpp"

namespace navcon::pipeline {

using projection::Representation;

enum class Category { Generic, Specific, Relational, Contextual };

inline constexpr std::array<Category, 4> kCategories{Category::Generic, Category::Specific, Category::Relational,
                                                     Category::Contextual};

inline const char* to_string(Category c) {
  switch (c) {
    case Category::Generic: return "Generic";
    case Category::Specific: return "Specific";
    case Category::Relational: return "Relational";
    case Category::Contextual: return "Contextual";
  }
  return "Generic";
}

inline Category category_from(std::string_view s) {
  for (Category c : kCategories)
    if (s == to_string(c)) return c;
  throw Error("unknown command category: " + std::string(s));
}

struct NavCommand {
  std::string text;
  Category category = Category::Generic;
  std::string scene;
  Representation representation = Representation::A;
  std::optional<std::string> fixture;  // corpus id; none means look it up by text, or ask the live endpoint
  std::optional<std::string> target;   // annotated object id for the OD and WP checks
};

struct StageOutcome {
  bool pass = false;
  std::string detail;
};

struct StageOutcomes {
  StageOutcome code, od, wp, path_exec;

  [[nodiscard]] std::array<const StageOutcome*, 4> ordered() const { return {&code, &od, &wp, &path_exec}; }

  /// No stage passes after a failed one.
  [[nodiscard]] bool monotone() const {
    bool failed = false;
    for (const auto* s : ordered()) {
      if (failed && s->pass) return false;
      failed = failed || !s->pass;
    }
    return true;
  }
};

/// Pass thresholds for the OD and WP stages.
struct StageThresholds {
  double od_iou = 0.5;
  double wp_distance = 1.0;  // meters from waypoint to the target's footprint
};

struct CommandReport {
  NavCommand command;
  std::optional<std::string> program;
  runtime::ExecutionTrace trace;
  std::optional<runtime::NavResult> nav_result;
  std::optional<double> od_iou;
  std::optional<projection::Waypoint> waypoint;
  std::optional<double> wp_distance;
  std::optional<planner::PlannedPath> path;
  std::optional<bool> follow_success;
  double follow_time = 0.0;
  world::Pose2 start_pose;
  world::Pose2 final_pose;
  StageOutcomes stages;
  std::map<std::string, double> timings_ms;
};

inline nlohmann::json to_json(const world::Pose2& p) { return {{"x", p.x}, {"y", p.y}, {"yaw", p.yaw}}; }

inline nlohmann::json to_json(const world::Vec3& v) { return nlohmann::json::array({v.x, v.y, v.z}); }

inline nlohmann::json to_json(const NavCommand& c) {
  nlohmann::json j{{"text", c.text},
                   {"category", to_string(c.category)},
                   {"scene", c.scene},
                   {"representation", projection::to_string(c.representation)}};
  j["fixture"] = c.fixture ? nlohmann::json(*c.fixture) : nlohmann::json(nullptr);
  j["target"] = c.target ? nlohmann::json(*c.target) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const StageOutcomes& s) {
  auto one = [](const StageOutcome& o) { return nlohmann::json{{"pass", o.pass}, {"detail", o.detail}}; };
  return {{"code", one(s.code)}, {"od", one(s.od)}, {"wp", one(s.wp)}, {"path_exec", one(s.path_exec)}};
}

inline nlohmann::json to_json(const runtime::ExecutionTrace& t) {
  nlohmann::json calls = nlohmann::json::array();
  for (const auto& c : t.api_calls) calls.push_back({{"name", c.name}, {"args", c.args}, {"result", c.result}});
  return {{"steps", t.steps_used}, {"api_calls", calls}, {"notes", t.notes}, {"patches", t.patch_registry.size()}};
}

inline nlohmann::json to_json(const projection::Waypoint& w) {
  nlohmann::json j{{"position", to_json(w.position)},
                   {"status", projection::to_string(w.status)},
                   {"standoff", w.standoff_applied},
                   {"clamped", w.clamped}};
  if (w.hit_voxel) j["hit_voxel"] = {w.hit_voxel->x, w.hit_voxel->y, w.hit_voxel->z};
  return j;
}

inline nlohmann::json to_json(const planner::PlannedPath& p) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& w : p.waypoints) pts.push_back(to_json(w));
  return {{"waypoints", pts}, {"node_ids", p.node_ids}, {"cost", p.cost}, {"reached_goal", p.reached_goal},
          {"replans", p.replans}};
}

/// Report as JSON. Timings are wall-clock and excluded unless asked for, so reports stay reproducible.
inline nlohmann::json to_json(const CommandReport& r, bool with_timings = false) {
  nlohmann::json j;
  j["command"] = to_json(r.command);
  j["program"] = r.program ? nlohmann::json(*r.program) : nlohmann::json(nullptr);
  j["trace"] = to_json(r.trace);
  j["nav_result"] = r.nav_result ? runtime::to_json(*r.nav_result) : nlohmann::json(nullptr);
  j["od_iou"] = r.od_iou ? nlohmann::json(*r.od_iou) : nlohmann::json(nullptr);
  j["waypoint"] = r.waypoint ? to_json(*r.waypoint) : nlohmann::json(nullptr);
  j["wp_distance"] = r.wp_distance ? nlohmann::json(*r.wp_distance) : nlohmann::json(nullptr);
  j["path"] = r.path ? to_json(*r.path) : nlohmann::json(nullptr);
  j["follow"] = r.follow_success ? nlohmann::json{{"success", *r.follow_success}, {"sim_time", r.follow_time}}
                                 : nlohmann::json(nullptr);
  j["start_pose"] = to_json(r.start_pose);
  j["final_pose"] = to_json(r.final_pose);
  j["stages"] = to_json(r.stages);
  if (with_timings) j["timings_ms"] = r.timings_ms;
  return j;
}

}  // namespace navcon::pipeline
