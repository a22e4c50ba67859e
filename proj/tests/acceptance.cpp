// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "navcon/eval/aggregate.hpp"
#include "navcon/eval/live.hpp"
#include "navcon/eval/records.hpp"
#include "navcon/lang/lang.hpp"
#include "navcon/pipeline/corpus.hpp"
#include "navcon/pipeline/run.hpp"
#include "navcon/planner/follower.hpp"
#include "navcon/planner/graph.hpp"
#include "navcon/planner/planner.hpp"
#include "navcon/projection/panorama.hpp"
#include "navcon/projection/raycast.hpp"
#include "navcon/runtime/runtime.hpp"
#include "navcon/world/render.hpp"
#include "navcon/world/world.hpp"
#include "oracles.hpp"
#include "snippets.hpp"
#include "support.hpp"

using namespace navcon;
using navcon::projection::Representation;
using navcon::testing::data_dir;
namespace fs = std::filesystem;
namespace snippets = navcon::testing::snippets;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      problems.push_back(what);
    }
  }
};

world::World scene(const std::string& name) { return world::World::load(data_dir() / "scenes" / (name + ".json")); }

// ---- table reproduction ----

struct Row {
  std::string group;
  std::int64_t count;
  std::vector<std::string> cells;
};

void compare_table(Outcome& out, const std::string& name, const eval::AggregateTable& t, const std::vector<Row>& want) {
  out.require(t.rows.size() == want.size(), name + ": row count " + std::to_string(t.rows.size()));
  for (const auto& w : want) {
    const auto* r = t.row(w.group);
    if (r == nullptr) {
      out.require(false, name + ": missing row " + w.group);
      continue;
    }
    out.require(r->count == w.count, name + "/" + w.group + ": count " + std::to_string(r->count));
    for (std::size_t i = 0; i < w.cells.size() && i < r->pct.size(); ++i)
      out.require(r->pct[i].fixed() == eval::Percent::parse(w.cells[i]).fixed(),
                  name + "/" + w.group + "/" + t.columns[i] + ": " + r->pct[i].fixed() + " != " + w.cells[i]);
  }
}

Outcome tables() {
  Outcome out;
  const auto t0 = Clock::now();
  const auto appendix = eval::load_records(data_dir() / "records" / "appendix_records.json");
  const auto classroom = eval::load_records(data_dir() / "records" / "classroom_records.json");
  compare_table(out, "categories", eval::aggregate(appendix, eval::Grouping::Category),
                {{"Generic", 22, {"100.00", "81.82", "68.18", "68.18"}},
                 {"Specific", 19, {"89.47", "89.47", "78.95", "73.68"}},
                 {"Relational", 44, {"70.45", "56.82", "56.82", "56.82"}},
                 {"Contextual", 29, {"65.52", "41.38", "41.38", "41.38"}},
                 {"Total", 114, {"78.07", "63.16", "58.77", "57.89"}}});
  compare_table(out, "scenes", eval::aggregate(appendix, eval::Grouping::Scene),
                {{"theater", 30, {"90.00", "70.00", "66.67", "63.33"}},
                 {"lobby", 29, {"65.52", "48.28", "44.83", "44.83"}},
                 {"outdoor", 24, {"87.50", "79.17", "70.83", "70.83"}},
                 {"courtyard", 31, {"70.97", "58.06", "54.84", "54.84"}},
                 {"Total", 114, {"78.07", "63.16", "58.77", "57.89"}}});
  compare_table(out, "representations", eval::aggregate(classroom, eval::Grouping::Representation),
                {{"Generic", 12, {"100.00", "100.00"}},
                 {"Specific", 12, {"91.67", "66.67"}},
                 {"Relational", 15, {"86.67", "53.33"}},
                 {"Contextual", 11, {"81.82", "45.45"}},
                 {"Total", 50, {"90.00", "66.00"}}});
  const double dt = seconds_since(t0);
  out.require(dt < 1.0, "took " + std::to_string(dt) + " s");
  std::ostringstream d;
  d << "3 tables, 15 rows, " << dt * 1000 << " ms";
  out.detail = d.str();
  return out;
}

// ---- interpreter conformance ----

runtime::Execution run_program(const std::string& src, const world::World& w, Representation mode) {
  auto views = std::make_shared<world::ViewSet>(
      world::render_views(*w.scene, *w.map, world::RobotState::at_start(*w.scene)));
  return runtime::execute_program(lang::parse_program(src), *w.scene, projection::assemble_representation(views, mode), {});
}

bool has_line_error(const runtime::Execution& ex) {
  return ex.result.error && ex.result.error->find("(line") != std::string::npos;
}

Outcome interpreter() {
  Outcome out;
  int programs = 0;
  for (const auto& [name, src] : std::vector<std::pair<std::string, std::string>>{
           {"outlet sort", lang::wrap_fragment(std::string("outlet_patches = ImagePatch(image).find('outlet')\n") +
                                                snippets::kOutletSort)},
           {"second floor", lang::wrap_fragment(snippets::kSecondFloor)},
           {"firefighter", snippets::kFirefighter},
           {"outlet program", snippets::kOutletProgram},
           {"movie program", snippets::kMovieProgram}}) {
    ++programs;
    try {
      out.require(lang::validate_program(lang::parse_program(src)).ok, name + " fails validation");
    } catch (const std::exception& e) {
      out.require(false, name + ": " + e.what());
    }
  }

  const auto classroom = scene("classroom");
  const auto outlet = run_program(snippets::kOutletProgram, classroom, Representation::A);
  out.require(outlet.result.ok(), "outlet program: " + outlet.result.error.value_or(""));

  const auto lobby = scene("lobby");
  const auto floor = run_program(lang::wrap_fragment(snippets::kSecondFloor) +
                                     "    return {'function': 'navigate_to_object', 'inputs': "
                                     "(second_floor_patch.horizontal_center, second_floor_patch.vertical_center)}\n",
                                 lobby, Representation::A);
  out.require(floor.result == runtime::NavResult::failure("Image does not contain at least two floors."),
              "second floor program result");

  const auto corpus = pipeline::load_corpus(data_dir() / "corpus" / "sim_corpus.json");
  const auto* entry = pipeline::find_entry(corpus, "lobby", "Go to the second floor");
  out.require(entry != nullptr, "second floor corpus entry missing");
  if (entry != nullptr) {
    pipeline::Session s(scene("lobby"));
    const auto rep = pipeline::run_command(entry->command(), s, pipeline::PipelineConfig{});
    out.require(rep.nav_result && rep.nav_result->function == "None" &&
                    rep.nav_result->error.value_or("") == "Image does not contain at least two floors.",
                "second floor fixture NavResult");
  }

  const auto docs = testing::make_world(snippets::docstring_scene());
  std::map<std::string, runtime::Execution> runs;
  for (const auto& ex : snippets::docstring_examples()) {
    ++programs;
    const auto r = run_program(ex.source, docs, Representation::A);
    out.require(r.validation.ok, ex.name + " fails validation");
    out.require(!has_line_error(r), ex.name + ": " + r.result.error.value_or(""));
    runs.emplace(ex.name, r);
  }
  const std::vector<std::pair<std::string, std::string>> answers{
      {"exists_foo_and_bar", "yes"}, {"verify_letters_blue", "yes"}, {"foo_gold_or_white", "gold"},
      {"baz_not_fredding", "plain baz"}, {"foo_color", "blue"},      {"second_bar_quuxy", "yes"}};
  for (const auto& [name, want] : answers)
    out.require(runs.count(name) != 0 && runs.at(name).raw.str() == want, name + " answer");
  const auto repaired = run_program(snippets::kBlueFooRepaired, docs, Representation::A);
  out.require(repaired.result.ok(), "repaired nav-client example");
  out.detail = std::to_string(programs + 1) + " programs";
  return out;
}

// ---- representation A/B ----

Outcome representation() {
  Outcome out;
  const auto w = scene("classroom");
  const auto& sc = *w.scene;
  std::vector<std::pair<double, std::string>> bearings;
  for (const auto& o : sc.objects) {
    if (o.label != "outlet") continue;
    double b = std::atan2((o.box.min.y + o.box.max.y) / 2 - sc.robot_start.y,
                          (o.box.min.x + o.box.max.x) / 2 - sc.robot_start.x) -
               sc.robot_start.yaw;
    while (b < -std::numbers::pi * 0.75) b += 2 * std::numbers::pi;
    bearings.emplace_back(b, o.id);
  }
  out.require(bearings.size() == 3, "classroom should hold three outlets");
  if (bearings.size() != 3) return out;
  std::sort(bearings.begin(), bearings.end());
  const std::string truth = bearings[1].second;
  auto selected = [&](Representation mode) {
    const auto ex = run_program(snippets::kOutletProgram, w, mode);
    for (const auto& rec : ex.trace.patch_registry)
      if (rec.origin == "find" && ex.result.box == rec.bounds) return rec.object_id;
    return std::string("none");
  };
  const auto a = selected(Representation::A), b = selected(Representation::B);
  out.require(a == truth, "A selected " + a + ", truth " + truth);
  out.require(b != truth, "B also selected the true middle outlet");

  const auto ev = eval::run_live_eval(pipeline::load_corpus(data_dir() / "corpus" / "sim_corpus.json"),
                                      data_dir() / "scenes", pipeline::PipelineConfig{});
  int pa = 0, pb = 0;
  for (const auto& r : ev.ab_records) {
    pa += r.stages[0];
    pb += r.stages[1];
  }
  out.require(ev.ab_records.size() >= 10, "cross-frame sub-corpus has " + std::to_string(ev.ab_records.size()));
  out.require(pa > pb, "OD passes A " + std::to_string(pa) + " vs B " + std::to_string(pb));
  out.detail = "middle outlet A=" + a + " B=" + b + "; cross-frame OD " + std::to_string(pa) + " vs " +
               std::to_string(pb) + " of " + std::to_string(ev.ab_records.size());
  return out;
}

// ---- ray casting ----

Outcome raycast() {
  Outcome out;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double resolutions[] = {0.1, 0.25, 0.5, 1.0};
  const int maps = 25;
  int rays = 0, excluded = 0, mismatched = 0;
  for (int mi = 0; mi < maps; ++mi) {
    std::uniform_int_distribution<int> dim(6, 24);
    world::VoxelMap m(resolutions[mi % 4], {dim(rng), dim(rng), dim(rng)});
    const double density = 0.02 + 0.1 * u(rng);
    for (int z = 0; z < m.dims()[2]; ++z)
      for (int y = 0; y < m.dims()[1]; ++y)
        for (int x = 0; x < m.dims()[0]; ++x)
          if (u(rng) < density) m.set({x, y, z});
    const auto e = m.extent();
    for (int k = 0; k < 60; ++k) {
      const world::Vec3 o{u(rng) * e.x, u(rng) * e.y, u(rng) * e.z};
      m.set(m.index_of(o), false);
      const auto ray = projection::make_ray(o, {u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5});
      const auto oracle = testing::march(ray, m, 40.0);
      ++rays;
      if (oracle.grazing) {
        ++excluded;
        continue;
      }
      const auto got = projection::raycast_first_hit(ray, m, 40.0);
      if (got.hit() != oracle.hit || (got.hit() && !(got.voxel == oracle.voxel))) ++mismatched;
    }
  }
  const double dt = seconds_since(t0);
  out.require(mismatched == 0, std::to_string(mismatched) + " rays disagree");
  out.require(excluded * 1000 <= rays, std::to_string(excluded) + " exclusions");
  out.require(dt < 10.0, "took " + std::to_string(dt) + " s");
  std::ostringstream d;
  d << rays << " rays over " << maps << " maps, " << excluded << " grazing exclusions, " << dt << " s";
  out.detail = d.str();
  return out;
}

// ---- planner ----

Outcome planner_oracle() {
  using namespace navcon::planner;
  Outcome out;
  const auto t0 = Clock::now();
  std::mt19937 rng(2024);
  int trials = 0, agree = 0, edges = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto w = testing::random_block_world(rng);
    std::vector<std::pair<int, int>> open;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (!w.blocked[i][j]) open.emplace_back(i, j);
    if (open.size() < 2) continue;
    std::shuffle(open.begin(), open.end(), rng);
    const world::Vec3 start{open[0].first + 0.625, open[0].second + 0.625, 0.25};
    const world::Vec3 goal{open[1].first + 0.625, open[1].second + 0.625, 0.25};
    PlannerConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const ColumnIndex cols(w.map);
    world::RobotState robot;
    robot.pose = {start.x, start.y, 0.0};
    NavGraph g;
    const auto p = plan_from_robot(robot, goal, cols, cfg, &g);
    ++trials;
    const bool oracle = testing::grid_reachable(w, start, goal, cfg.footprint_radius);
    agree += p.reached_goal == oracle;
    out.require(p.reached_goal == oracle, "trial " + std::to_string(trial) + " reachability");
    if (p.waypoints.size() >= 2)
      out.require(p.cost + 1e-9 >= (p.waypoints.back() - p.waypoints.front()).norm(),
                  "trial " + std::to_string(trial) + " cost below straight line");
    const double max_grade = std::tan(cfg.max_slope_deg * std::numbers::pi / 180.0);
    for (const auto& e : g.edges) {
      ++edges;
      const auto a = g.nodes[static_cast<std::size_t>(e.a)].position;
      const auto b = g.nodes[static_cast<std::size_t>(e.b)].position;
      const double h = std::hypot(b.x - a.x, b.y - a.y);
      out.require(std::abs(b.z - a.z) <= h * max_grade + 1e-9, "trial " + std::to_string(trial) + " edge slope");
      out.require(testing::edge_clear_by_sampling(w.map, a, b, cfg),
                  "trial " + std::to_string(trial) + " edge clearance");
    }
  }
  const double dt = seconds_since(t0);
  out.require(trials >= 50, "only " + std::to_string(trials) + " maps");
  out.require(dt < 60.0, "took " + std::to_string(dt) + " s");
  std::ostringstream d;
  d << agree << "/" << trials << " maps agree with grid BFS, " << edges << " edges audited, " << dt << " s";
  out.detail = d.str();
  return out;
}

// ---- path following ----

Outcome follower() {
  using namespace navcon::planner;
  Outcome out;
  const std::vector<std::string> names{"theater", "lobby", "outdoor", "courtyard", "classroom", "clipping"};
  std::vector<world::World> worlds;
  for (const auto& n : names) worlds.push_back(scene(n));
  std::mt19937_64 rng(2026);
  int feasible = 0, followed = 0, attempts = 0;
  while (feasible < 100 && attempts < 1000) {
    const auto& w = worlds[static_cast<std::size_t>(attempts++) % worlds.size()];
    const ColumnIndex cols(*w.map);
    auto cfg = PlannerConfig::for_robot(w.scene->robot, rng());
    const auto e = w.map->extent();
    std::uniform_real_distribution<double> ux(0.5, e.x - 0.5), uy(0.5, e.y - 0.5);
    const auto start = project_sample(ux(rng), uy(rng), cols, cfg);
    const auto goal = project_sample(ux(rng), uy(rng), cols, cfg);
    if (!std::holds_alternative<world::Vec3>(start) || !std::holds_alternative<world::Vec3>(goal)) continue;
    auto robot = world::RobotState::at_start(*w.scene);
    robot.pose = {std::get<world::Vec3>(start).x, std::get<world::Vec3>(start).y,
                  std::uniform_real_distribution<double>(-3, 3)(rng)};
    const auto p = plan_from_robot(robot, std::get<world::Vec3>(goal), cols, cfg);
    if (!p.reached_goal) continue;
    ++feasible;
    followed += follow_path(p, robot).success ? 1 : 0;
  }
  out.require(feasible == 100, "only " + std::to_string(feasible) + " feasible paths");
  out.require(followed == feasible, std::to_string(feasible - followed) + " paths not followed");
  out.detail = std::to_string(followed) + "/" + std::to_string(feasible) + " paths followed across " +
               std::to_string(names.size()) + " scenes";
  return out;
}

// ---- end-to-end determinism ----

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome out;
  const fs::path dir = fs::temp_directory_path() / ("navcon_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  std::vector<std::string> reports;
  for (int i = 0; i < 2; ++i) {
    const auto report = dir / ("report_" + std::to_string(i) + ".json");
    const std::string cmd = std::string("\"") + NAVCON_CLI +
                            "\" run --scene theater --command \"Go to the fire extinguisher\" --seed 7 --report \"" +
                            report.string() + "\" > /dev/null";
    const int rc = std::system(cmd.c_str());
    out.require(rc == 0, "run exited with " + std::to_string(rc));
    reports.push_back(slurp(report));
  }
  fs::remove_all(dir);
  out.require(!reports[0].empty(), "empty report");
  out.require(reports[0] == reports[1], "reports differ");
  out.detail = "two CLI runs, " + std::to_string(reports[0].size()) + "-byte reports identical";
  return out;
}

// ---- build composition ----

Outcome build_composition() {
  Outcome out;
  std::istringstream targets(NAVCON_BUILT_TARGETS);
  std::string t;
  int n = 0;
  while (std::getline(targets, t, ';')) {
    if (t.empty()) continue;
    ++n;
    const bool known = t == "navcon" || t == "navcon_service" || t == "navcon_cli" || t == "acceptance" ||
                       (t.size() > 5 && t.ends_with("_test"));
    out.require(known, "unexpected build target " + t);
  }
  out.detail = std::to_string(n) + " targets: libraries, CLI and C++ tests only";
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> property_checks{
      {"table-reproduction", tables},       {"interpreter-conformance", interpreter},
      {"representation-ab", representation}, {"raycast-oracle", raycast},
      {"planner-oracle", planner_oracle},    {"path-following", follower},
      {"end-to-end-determinism", determinism}, {"primary-only-build", build_composition}};

  int failures = 0;
  bool substitutes_pass = true;
  auto report = [&](const char* name, const Outcome& o) {
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    for (const auto& p : o.problems) std::printf("    %s\n", p.c_str());
    failures += o.pass ? 0 : 1;
  };
  for (const auto& c : property_checks) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (std::string(c.name) != "primary-only-build") substitutes_pass = substitutes_pass && o.pass;
    report(c.name, o);
  }

  // Success rates measured with a hosted language model and a learned detector cannot be rerun offline;
  // the record aggregation and the property checks above stand in for them.
  Outcome live;
  live.require(substitutes_pass, "a substitute check failed");
  live.detail = "live-model rates not rerun; substituted by the record and property checks above";
  report("live-rates-substitution", live);

  std::printf("%s: %d of %zu criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures,
              property_checks.size() + 1);
  return failures == 0 ? 0 : 1;
}
