#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "navcon/error.hpp"
#include "navcon/world/geometry.hpp"
#include "navcon/world/scene.hpp"
#include "navcon/world/voxel_map.hpp"

namespace navcon::planner {

using world::Vec3;
using world::VoxelMap;

struct PlannerConfig {
  double sample_spacing = 0.25;  // robot width / 2
  double connect_radius = 2.2;   // 2 x robot length
  double max_slope_deg = 30.0;
  double clearance = 0.8;        // robot height + 0.1
  double footprint_radius = 0.25;
  double step_height = 0.15;     // obstacles lower than this above the support are driven over
  int samples_per_expansion = 200;
  int replan_cap = 10;
  double goal_tolerance = 0.5;
  std::uint64_t seed = 0;

  static PlannerConfig for_robot(const world::Footprint& f, std::uint64_t seed = 0) {
    PlannerConfig c;
    c.sample_spacing = f.width / 2;
    c.connect_radius = 2 * f.length;
    c.clearance = f.height + 0.1;
    c.footprint_radius = f.width / 2;
    c.seed = seed;
    return c;
  }

  [[nodiscard]] double sampling_radius() const { return 3 * connect_radius; }

  void validate() const {
    if (!(sample_spacing > 0 && connect_radius > 0 && max_slope_deg > 0 && clearance > 0 &&
          footprint_radius > 0 && step_height >= 0 && samples_per_expansion > 0 && goal_tolerance > 0) ||
        replan_cap < 1)
      throw Error("planner config values must be positive and the replan cap at least 1");
  }
};

/// Occupied z-runs per column, for fast vertical band queries.
class ColumnIndex {
 public:
  explicit ColumnIndex(const VoxelMap& map) : map_(&map) {
    const auto& d = map.dims();
    runs_.resize(static_cast<std::size_t>(d[0]) * d[1]);
    for (int y = 0; y < d[1]; ++y)
      for (int x = 0; x < d[0]; ++x) {
        auto& col = runs_[index(x, y)];
        int start = -1;
        for (int z = 0; z <= d[2]; ++z) {
          const bool occ = z < d[2] && map.occupied(x, y, z);
          if (occ && start < 0) start = z;
          if (!occ && start >= 0) {
            col.emplace_back(start, z);
            start = -1;
          }
        }
      }
  }

  [[nodiscard]] const VoxelMap& map() const { return *map_; }

  /// Top of the occupied run resting on the map floor, if the column has one.
  [[nodiscard]] std::optional<double> support(int x, int y) const {
    const auto& col = runs_[index(x, y)];
    if (col.empty() || col.front().first != 0) return std::nullopt;
    return col.front().second * map_->resolution();
  }

  /// Any occupied voxel overlapping the height band [lo, hi).
  [[nodiscard]] bool band_occupied(int x, int y, double lo, double hi) const {
    const double r = map_->resolution();
    for (const auto& [a, b] : runs_[index(x, y)])
      if (a * r < hi - 1e-9 && b * r > lo + 1e-9) return true;
    return false;
  }

 private:
  const VoxelMap* map_;
  std::vector<std::vector<std::pair<int, int>>> runs_;

  [[nodiscard]] std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * map_->dims()[0] + x;
  }
};

struct Rejection {
  std::string reason;
};

using Projection = std::variant<Vec3, Rejection>;

namespace detail {

// Squared distance from a point to an axis-aligned square [x0,x1]x[y0,y1].
inline double point_square_dist2(double px, double py, double x0, double y0, double x1, double y1) {
  const double dx = std::max({x0 - px, 0.0, px - x1});
  const double dy = std::max({y0 - py, 0.0, py - y1});
  return dx * dx + dy * dy;
}

// Parameter in [0, 1] of the point on segment a-b closest to the square, and the squared distance.
inline std::pair<double, double> segment_square(double ax, double ay, double bx, double by, double x0, double y0,
                                                double x1, double y1) {
  const double dx = bx - ax, dy = by - ay;
  // Liang-Barsky clip: a nonempty clipped span means the segment touches the square.
  double t0 = 0.0, t1 = 1.0;
  bool inside = true;
  for (const auto& [p, q] : {std::pair{-dx, ax - x0}, std::pair{dx, x1 - ax}, std::pair{-dy, ay - y0},
                             std::pair{dy, y1 - ay}}) {
    if (p == 0.0) {
      if (q < 0.0) inside = false;
    } else {
      const double t = q / p;
      if (p < 0.0) t0 = std::max(t0, t);
      else t1 = std::min(t1, t);
    }
  }
  if (inside && t0 <= t1) return {(t0 + t1) / 2, 0.0};
  std::pair<double, double> best{0.0, point_square_dist2(ax, ay, x0, y0, x1, y1)};
  const double end = point_square_dist2(bx, by, x0, y0, x1, y1);
  if (end < best.second) best = {1.0, end};
  const double len2 = dx * dx + dy * dy;
  if (len2 > 0.0) {
    for (const auto& [cx, cy] : {std::pair{x0, y0}, std::pair{x0, y1}, std::pair{x1, y0}, std::pair{x1, y1}}) {
      const double t = std::clamp(((cx - ax) * dx + (cy - ay) * dy) / len2, 0.0, 1.0);
      const double ex = ax + dx * t - cx, ey = ay + dy * t - cy;
      if (ex * ex + ey * ey < best.second) best = {t, ex * ex + ey * ey};
    }
  }
  return best;
}

}  // namespace detail

/// Whether the robot body swept from a to b stays clear. At every pose along the segment, with the
/// height z interpolated between the endpoints, columns within the footprint radius must be free
/// between z + step height and z + clearance.
inline bool sweep_free(Vec3 a, Vec3 b, const ColumnIndex& cols, const PlannerConfig& cfg) {
  const auto& map = cols.map();
  const double res = map.resolution();
  const double r = cfg.footprint_radius;
  const int x0 = std::max(0, static_cast<int>(std::floor((std::min(a.x, b.x) - r) / res)));
  const int x1 = std::min(map.dims()[0] - 1, static_cast<int>(std::floor((std::max(a.x, b.x) + r) / res)));
  const int y0 = std::max(0, static_cast<int>(std::floor((std::min(a.y, b.y) - r) / res)));
  const int y1 = std::min(map.dims()[1] - 1, static_cast<int>(std::floor((std::max(a.y, b.y) + r) / res)));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const auto [t, d2] = detail::segment_square(a.x, a.y, b.x, b.y, x * res, y * res, (x + 1) * res, (y + 1) * res);
      if (d2 >= r * r) continue;
      double lo = a.z + (b.z - a.z) * t, hi = lo;
      if (a.z != b.z) {
        // The footprint touches this column for a parameter interval around t; the distance is
        // convex in t, so each end is found by bisection.
        auto touches = [&](double u) {
          return detail::point_square_dist2(a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u, x * res, y * res,
                                            (x + 1) * res, (y + 1) * res) < r * r;
        };
        auto edge = [&](double in, double out) {
          if (touches(out)) return out;
          for (int i = 0; i < 48; ++i) {
            const double mid = (in + out) / 2;
            (touches(mid) ? in : out) = mid;
          }
          return out;
        };
        const double z0 = a.z + (b.z - a.z) * edge(t, 0.0), z1 = a.z + (b.z - a.z) * edge(t, 1.0);
        lo = std::min({lo, z0, z1});
        hi = std::max({hi, z0, z1});
      }
      if (cols.band_occupied(x, y, lo + cfg.step_height, hi + cfg.clearance)) return false;
    }
  return true;
}

/// Grade between two node positions within the slope limit.
inline bool slope_ok(Vec3 a, Vec3 b, const PlannerConfig& cfg) {
  const double h = std::hypot(b.x - a.x, b.y - a.y);
  const double dz = std::abs(b.z - a.z);
  if (h <= 0.0) return dz <= 1e-9;
  return dz / h <= std::tan(cfg.max_slope_deg * std::numbers::pi / 180.0) + 1e-12;
}

/// Places a planar sample on the terrain, or says why it cannot stand there.
inline Projection project_sample(double x, double y, const ColumnIndex& cols, const PlannerConfig& cfg) {
  const auto& map = cols.map();
  const Vec3 e = map.extent();
  if (!(x >= 0 && y >= 0 && x <= e.x && y <= e.y)) throw GeometryError("sample outside map extent");
  const auto idx = map.index_of({x, y, 0.0});
  const auto support = cols.support(idx.x, idx.y);
  if (!support) return Rejection{"no terrain"};
  if (*support + cfg.clearance > map.extent().z + 1e-9 ||
      cols.band_occupied(idx.x, idx.y, *support, *support + cfg.clearance))
    return Rejection{"insufficient clearance"};
  const Vec3 p{x, y, *support};
  if (!sweep_free(p, p, cols, cfg)) return Rejection{"footprint collision"};
  return p;
}

inline Projection project_sample(double x, double y, const VoxelMap& map, const PlannerConfig& cfg) {
  return project_sample(x, y, ColumnIndex(map), cfg);
}

struct Node {
  int id = 0;
  Vec3 position;
};

struct Edge {
  int a = 0;
  int b = 0;
  double cost = 0.0;
};

/// Undirected roadmap rooted at node 0.
struct NavGraph {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  std::vector<std::vector<std::pair<int, double>>> adjacency;
  std::vector<int> boundary_nodes;
  std::vector<Vec3> expansion_centers;
  std::vector<double> expansion_radii;

  [[nodiscard]] int add_node(Vec3 p) {
    const int id = static_cast<int>(nodes.size());
    nodes.push_back({id, p});
    adjacency.emplace_back();
    return id;
  }

  void add_edge(int a, int b) {
    const double cost = (nodes[b].position - nodes[a].position).norm();
    edges.push_back({a, b, cost});
    adjacency[a].emplace_back(b, cost);
    adjacency[b].emplace_back(a, cost);
  }

  [[nodiscard]] bool is_boundary(int id) const {
    return std::binary_search(boundary_nodes.begin(), boundary_nodes.end(), id);
  }
};

/// Degree expected for a node surrounded by samples at the configured spacing, halved.
inline double boundary_degree_threshold(const NavGraph& g) {
  if (g.nodes.empty()) return 0.0;
  return 0.5 * 2.0 * static_cast<double>(g.edges.size()) / static_cast<double>(g.nodes.size());
}

/// Boundary = low degree, or within one connect radius of the edge of everything sampled so far.
inline void recompute_boundary(NavGraph& g, const PlannerConfig& cfg) {
  g.boundary_nodes.clear();
  const double threshold = boundary_degree_threshold(g);
  for (const auto& n : g.nodes) {
    const bool sparse = static_cast<double>(g.adjacency[n.id].size()) < threshold;
    bool interior = false;
    for (std::size_t i = 0; i < g.expansion_centers.size() && !interior; ++i) {
      const Vec3 d = n.position - g.expansion_centers[i];
      interior = std::hypot(d.x, d.y) <= g.expansion_radii[i] - cfg.connect_radius;
    }
    if (sparse || !interior) g.boundary_nodes.push_back(n.id);
  }
}

/// Edge admissibility: within reach, slope limit, and a collision-free sweep.
/// Every column under the segment's centerline has support within step height of the edge's
/// interpolated height there, so edges cannot bridge gaps or climb onto furniture.
inline bool terrain_continuous(Vec3 a, Vec3 b, const ColumnIndex& cols, const PlannerConfig& cfg) {
  const auto& map = cols.map();
  const double res = map.resolution();
  std::vector<double> ts{0.0, 1.0};
  auto crossings = [&](double p0, double p1) {
    if (p0 == p1) return;
    const double lo = std::min(p0, p1), hi = std::max(p0, p1);
    for (double k = std::ceil(lo / res); k * res < hi; ++k) ts.push_back((k * res - p0) / (p1 - p0));
  };
  crossings(a.x, b.x);
  crossings(a.y, b.y);
  std::sort(ts.begin(), ts.end());
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double t0 = std::clamp(ts[i], 0.0, 1.0), t1 = std::clamp(ts[i + 1], 0.0, 1.0);
    if (t1 - t0 < 1e-12) continue;
    const double tm = (t0 + t1) / 2;
    const auto idx = map.index_of({a.x + (b.x - a.x) * tm, a.y + (b.y - a.y) * tm, 0.0});
    const auto support = cols.support(idx.x, idx.y);
    if (!support) return false;
    const double z0 = a.z + (b.z - a.z) * t0, z1 = a.z + (b.z - a.z) * t1;
    if (*support < std::min(z0, z1) - cfg.step_height - 1e-9 || *support > std::max(z0, z1) + cfg.step_height + 1e-9)
      return false;
  }
  return true;
}

inline bool can_connect(Vec3 a, Vec3 b, const ColumnIndex& cols, const PlannerConfig& cfg) {
  if (std::hypot(b.x - a.x, b.y - a.y) > cfg.connect_radius) return false;
  return slope_ok(a, b, cfg) && terrain_continuous(a, b, cols, cfg) && sweep_free(a, b, cols, cfg);
}

/// Adds a projected point unless an existing node is closer than the sample spacing.
/// Returns the new node id, or nothing when the point was rejected.
inline std::optional<int> insert_point(NavGraph& g, double x, double y, const ColumnIndex& cols,
                                       const PlannerConfig& cfg) {
  const Vec3 e = cols.map().extent();
  if (!(x >= 0 && y >= 0 && x <= e.x && y <= e.y)) return std::nullopt;
  for (const auto& n : g.nodes)
    if (std::hypot(n.position.x - x, n.position.y - y) < cfg.sample_spacing) return std::nullopt;
  const auto proj = project_sample(x, y, cols, cfg);
  if (std::holds_alternative<Rejection>(proj)) return std::nullopt;
  const Vec3 p = std::get<Vec3>(proj);
  const int id = g.add_node(p);
  for (int other = 0; other < id; ++other)
    if (can_connect(g.nodes[other].position, p, cols, cfg)) g.add_edge(other, id);
  return id;
}

/// Uniform samples in a disc around `around`, projected and wired into the graph.
inline void expand_graph(NavGraph& g, Vec3 around, const ColumnIndex& cols, const PlannerConfig& cfg,
                         std::mt19937_64& rng, std::optional<double> radius = std::nullopt) {
  const double R = radius.value_or(cfg.sampling_radius());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < cfg.samples_per_expansion; ++i) {
    const double rho = R * std::sqrt(unit(rng));
    const double theta = 2 * std::numbers::pi * unit(rng);
    insert_point(g, around.x + rho * std::cos(theta), around.y + rho * std::sin(theta), cols, cfg);
  }
  g.expansion_centers.push_back(around);
  g.expansion_radii.push_back(R);
  recompute_boundary(g, cfg);
}

/// Graph with a root at (x, y) and one expansion around it.
inline NavGraph build_graph(double x, double y, const ColumnIndex& cols, const PlannerConfig& cfg,
                            std::mt19937_64& rng, std::optional<double> radius = std::nullopt) {
  cfg.validate();
  NavGraph g;
  const auto& map = cols.map();
  const auto idx = map.index_of({x, y, 0.0});
  const double z = cols.support(idx.x, idx.y).value_or(0.0);
  (void)g.add_node({x, y, z});
  expand_graph(g, g.nodes[0].position, cols, cfg, rng, radius);
  return g;
}

}  // namespace navcon::planner
