#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <vector>

#include "navcon/planner/graph.hpp"
#include "navcon/projection/waypoint.hpp"
#include "navcon/world/robot.hpp"

namespace navcon::planner {

struct PlannedPath {
  std::vector<int> node_ids;
  std::vector<Vec3> waypoints;
  double cost = 0.0;
  bool reached_goal = false;
  int replans = 0;  // expansions performed after the initial graph
};

/// Single-source shortest path tree by edge length. Among equal-cost paths the one whose
/// node-id sequence is lexicographically smallest wins.
struct ShortestPathTree {
  std::vector<double> cost;
  std::vector<int> parent;

  [[nodiscard]] bool reachable(int id) const { return cost[static_cast<std::size_t>(id)] < kInf; }

  [[nodiscard]] std::vector<int> path_to(int id) const {
    std::vector<int> out;
    for (int v = id; v >= 0; v = parent[static_cast<std::size_t>(v)]) out.push_back(v);
    std::reverse(out.begin(), out.end());
    return out;
  }

  static constexpr double kInf = std::numeric_limits<double>::infinity();
};

inline ShortestPathTree shortest_path_tree(const NavGraph& g, int from) {
  const std::size_t n = g.nodes.size();
  ShortestPathTree t{std::vector<double>(n, ShortestPathTree::kInf), std::vector<int>(n, -1)};
  if (from < 0 || static_cast<std::size_t>(from) >= n) throw Error("shortest_path: node not in graph");
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  std::vector<bool> done(n, false);
  t.cost[static_cast<std::size_t>(from)] = 0.0;
  pq.emplace(0.0, from);
  while (!pq.empty()) {
    const auto [c, u] = pq.top();
    pq.pop();
    if (done[static_cast<std::size_t>(u)]) continue;
    done[static_cast<std::size_t>(u)] = true;
    for (const auto& [v, w] : g.adjacency[static_cast<std::size_t>(u)]) {
      const auto vi = static_cast<std::size_t>(v);
      if (done[vi]) continue;
      const double nc = c + w;
      bool better = nc < t.cost[vi];
      if (!better && nc == t.cost[vi]) {
        auto via_u = t.path_to(u);
        via_u.push_back(v);
        better = via_u < t.path_to(v);
      }
      if (better) {
        t.cost[vi] = nc;
        t.parent[vi] = u;
        pq.emplace(nc, v);
      }
    }
  }
  return t;
}

inline PlannedPath path_from_tree(const NavGraph& g, const ShortestPathTree& t, int to) {
  PlannedPath p;
  p.node_ids = t.path_to(to);
  for (int id : p.node_ids) p.waypoints.push_back(g.nodes[static_cast<std::size_t>(id)].position);
  p.cost = t.cost[static_cast<std::size_t>(to)];
  return p;
}

/// Minimum-length path, or nothing when `to` is unreachable. from == to gives the one-node path.
inline std::optional<PlannedPath> shortest_path(const NavGraph& g, int from, int to) {
  if (to < 0 || static_cast<std::size_t>(to) >= g.nodes.size()) throw Error("shortest_path: node not in graph");
  const auto t = shortest_path_tree(g, from);
  if (!t.reachable(to)) return std::nullopt;
  return path_from_tree(g, t, to);
}

namespace detail {

inline double dist3(Vec3 a, Vec3 b) { return (a - b).norm(); }

// Reachable node within tolerance of the goal with the cheapest path; ties by id.
inline std::optional<int> goal_node(const NavGraph& g, const ShortestPathTree& t, Vec3 goal, double tol) {
  std::optional<int> best;
  for (const auto& n : g.nodes) {
    if (!t.reachable(n.id) || dist3(n.position, goal) > tol) continue;
    if (!best || t.cost[static_cast<std::size_t>(n.id)] < t.cost[static_cast<std::size_t>(*best)]) best = n.id;
  }
  return best;
}

// Reachable boundary node nearest the goal; any reachable node when no boundary node is reachable.
inline int frontier_node(const NavGraph& g, const ShortestPathTree& t, Vec3 goal) {
  std::optional<int> best, fallback;
  auto closer = [&](int a, const std::optional<int>& b) {
    if (!b) return true;
    const double da = dist3(g.nodes[static_cast<std::size_t>(a)].position, goal);
    const double db = dist3(g.nodes[static_cast<std::size_t>(*b)].position, goal);
    return da < db || (da == db && a < *b);
  };
  for (const auto& n : g.nodes) {
    if (!t.reachable(n.id)) continue;
    if (g.is_boundary(n.id) && closer(n.id, best)) best = n.id;
    if (closer(n.id, fallback)) fallback = n.id;
  }
  return best ? *best : *fallback;
}

}  // namespace detail

/// Plans from the graph root toward the goal, growing the graph from the frontier until the goal
/// is reached or the replan cap runs out. Each round also offers the goal itself as a sample.
inline PlannedPath plan_to_waypoint(NavGraph& g, const Vec3& goal, const ColumnIndex& cols, const PlannerConfig& cfg,
                                    std::mt19937_64& rng) {
  cfg.validate();
  const Vec3 e = cols.map().extent();
  if (!(goal.x >= 0 && goal.y >= 0 && goal.x <= e.x && goal.y <= e.y)) throw GeometryError("goal outside map");
  if (g.nodes.empty()) throw Error("plan_to_waypoint: empty graph");
  int replans = 0;
  for (;;) {
    insert_point(g, goal.x, goal.y, cols, cfg);
    recompute_boundary(g, cfg);
    const auto tree = shortest_path_tree(g, 0);
    if (const auto hit = detail::goal_node(g, tree, goal, cfg.goal_tolerance)) {
      auto p = path_from_tree(g, tree, *hit);
      p.reached_goal = true;
      p.replans = replans;
      return p;
    }
    const int frontier = detail::frontier_node(g, tree, goal);
    if (replans == cfg.replan_cap) {
      auto p = path_from_tree(g, tree, frontier);
      p.replans = replans;
      return p;
    }
    expand_graph(g, g.nodes[static_cast<std::size_t>(frontier)].position, cols, cfg, rng);
    ++replans;
  }
}

inline PlannedPath plan_to_waypoint(NavGraph& g, const projection::Waypoint& goal, const ColumnIndex& cols,
                                    const PlannerConfig& cfg, std::mt19937_64& rng) {
  return plan_to_waypoint(g, goal.position, cols, cfg, rng);
}

/// Fresh graph at the robot and a plan to the goal.
inline PlannedPath plan_from_robot(const world::RobotState& robot, const Vec3& goal, const ColumnIndex& cols,
                                   const PlannerConfig& cfg, NavGraph* graph_out = nullptr) {
  std::mt19937_64 rng(cfg.seed);
  NavGraph g = build_graph(robot.pose.x, robot.pose.y, cols, cfg, rng);
  auto p = plan_to_waypoint(g, goal, cols, cfg, rng);
  if (graph_out) *graph_out = std::move(g);
  return p;
}

}  // namespace navcon::planner
