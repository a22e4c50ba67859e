// navcon: run one command, evaluate a corpus, or serve the HTTP/WebSocket API.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "navcon/eval/aggregate.hpp"
#include "navcon/eval/live.hpp"
#include "navcon/eval/records.hpp"
#include "navcon/pipeline/corpus.hpp"
#include "navcon/pipeline/run.hpp"
#include "navcon/service/server.hpp"

namespace fs = std::filesystem;
using namespace navcon;

namespace {

std::atomic<bool> g_interrupted{false};

// A scene argument is a file path or the name of a bundled scene.
fs::path scene_path(const std::string& arg) {
  if (fs::exists(arg)) return arg;
  const auto bundled = pipeline::default_data_dir() / "scenes" / (arg + ".json");
  if (fs::exists(bundled)) return bundled;
  throw Error("no scene file or bundled scene named " + arg);
}

struct CodegenFlags {
  std::string endpoint, token_env, model = "default", prompt, fixtures;

  void add(CLI::App& app) {
    app.add_option("--endpoint", endpoint, "chat-completion URL; enables live code generation");
    app.add_option("--token-env", token_env, "environment variable holding the bearer token");
    app.add_option("--model", model, "model name sent to the endpoint");
    app.add_option("--prompt", prompt, "prompt template file");
    app.add_option("--fixtures", fixtures, "fixture directory");
  }

  [[nodiscard]] pipeline::CodegenConfig config() const {
    pipeline::CodegenConfig c;
    if (!fixtures.empty()) c.fixture_dir = fixtures;
    if (!prompt.empty()) c.prompt_template = prompt;
    if (!endpoint.empty()) {
      c.mode = pipeline::CodegenConfig::Mode::Live;
      c.endpoint = endpoint;
      c.token_env = token_env;
      c.model = model;
      c.validate();
    }
    return c;
  }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw Error("cannot write " + p.string());
}

void print_table(const eval::AggregateTable& t) {
  std::printf("%-15s %6s", eval::to_string(t.grouping), "count");
  for (const auto& c : t.columns) std::printf(" %10s", c.c_str());
  std::printf("\n");
  for (const auto& r : t.rows) {
    std::printf("%-15s %6lld", r.group.c_str(), static_cast<long long>(r.count));
    for (const auto& p : r.pct) std::printf(" %10s", p.str().c_str());
    std::printf("\n");
  }
}

int cmd_run(const std::string& scene_arg, const std::string& text, const std::string& fixture, const std::string& rep,
            std::uint64_t seed, const std::string& report, const std::string& corpus_path, const CodegenFlags& flags,
            bool timings) {
  pipeline::Session session(world::World::load(scene_path(scene_arg)));
  pipeline::NavCommand cmd;
  cmd.text = text;
  cmd.scene = session.world.scene->name;
  cmd.representation = projection::representation_from(rep);
  const auto corpus = pipeline::load_corpus(corpus_path);
  if (const auto* e = pipeline::find_entry(corpus, cmd.scene, text)) {
    cmd.category = e->category;
    cmd.fixture = e->id;
    cmd.target = e->target;
  }
  if (!fixture.empty()) {
    cmd.fixture = fixture;
    for (const auto& e : corpus)
      if (e.id == fixture) cmd.target = e.target;
  }
  pipeline::PipelineConfig cfg;
  cfg.seed = seed;
  cfg.codegen = flags.config();
  const auto rep_out = pipeline::run_command(cmd, session, cfg);

  std::printf("%s [%s, %s]\n", cmd.text.c_str(), cmd.scene.c_str(), projection::to_string(cmd.representation));
  const std::array<const char*, 4> names{"Code", "OD", "WP", "Path&Exec"};
  const auto stages = rep_out.stages.ordered();
  for (std::size_t i = 0; i < 4; ++i)
    std::printf("  %-10s %s  %s\n", names[i], stages[i]->pass ? "Pass" : "Fail", stages[i]->detail.c_str());
  std::printf("  pose       (%.3f, %.3f, %.3f) -> (%.3f, %.3f, %.3f)\n", rep_out.start_pose.x, rep_out.start_pose.y,
              rep_out.start_pose.yaw, rep_out.final_pose.x, rep_out.final_pose.y, rep_out.final_pose.yaw);
  if (!report.empty()) write_file(report, pipeline::to_json(rep_out, timings).dump(2) + "\n");
  return 0;
}

int cmd_eval(const std::string& corpus_path, const std::string& mode, const std::string& report,
             const std::string& group, const std::string& scene_dir, std::uint64_t seed, const CodegenFlags& flags) {
  const bool as_json = fs::path(report).extension() == ".json";
  if (mode == "records") {
    const auto recs = eval::load_records(corpus_path);
    if (recs.empty()) throw Error("records file is empty");
    const auto grouping = recs.front().four_stage() ? eval::grouping_from(group) : eval::Grouping::Representation;
    const auto table = eval::aggregate(recs, grouping);
    print_table(table);
    if (!report.empty())
      eval::emit_report(table, recs, as_json ? eval::ReportFormat::Json : eval::ReportFormat::Csv, report);
    return 0;
  }
  if (mode != "live-sim") throw Error("unknown eval mode " + mode);
  pipeline::PipelineConfig cfg;
  cfg.seed = seed;
  cfg.codegen = flags.config();
  const auto ev = eval::run_live_eval(pipeline::load_corpus(corpus_path), scene_dir, cfg);
  print_table(ev.by_category);
  std::printf("\n");
  print_table(ev.by_scene);
  if (ev.by_representation) {
    std::printf("\ncross-frame OD\n");
    print_table(*ev.by_representation);
  }
  for (const auto& i : ev.invalid) std::printf("invalid %s: %s\n", i.id.c_str(), i.reason.c_str());
  if (!report.empty()) {
    if (as_json)
      write_file(report, eval::to_json(ev).dump(2) + "\n");
    else
      eval::emit_report(group == "scene" ? ev.by_scene : ev.by_category, ev.records, eval::ReportFormat::Csv, report);
  }
  return 0;
}

int cmd_serve(unsigned short port, const std::vector<std::string>& scenes, const std::string& address,
              const std::string& corpus_path, std::uint64_t seed, const CodegenFlags& flags) {
  pipeline::PipelineConfig cfg;
  cfg.seed = seed;
  cfg.codegen = flags.config();
  service::SessionHub hub(cfg, pipeline::load_corpus(corpus_path));
  for (const auto& s : scenes) hub.add(world::World::load(scene_path(s)));
  service::ServerConfig scfg;
  scfg.address = address;
  scfg.port = port;
  service::Server server(hub, scfg);
  server.start();
  std::printf("serving %zu scene(s) on http://%s:%u (default %s)\n", scenes.size(), address.c_str(), server.port(),
              hub.default_scene().c_str());
  std::fflush(stdout);
  std::signal(SIGINT, [](int) { g_interrupted = true; });
  std::signal(SIGTERM, [](int) { g_interrupted = true; });
  while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Language-driven navigation: code generation, grounding, projection and planning"};
  app.require_subcommand(1);
  const std::string default_corpus = (pipeline::default_data_dir() / "corpus" / "sim_corpus.json").string();

  auto* run = app.add_subcommand("run", "run one command against a scene");
  std::string scene, text, fixture, rep = "A", report, corpus = default_corpus;
  std::uint64_t seed = 0;
  bool timings = false;
  CodegenFlags run_flags;
  run->add_option("--scene", scene, "scene file or bundled scene name")->required();
  run->add_option("--command", text, "command sentence")->required();
  run->add_option("--fixture", fixture, "fixture id; defaults to the corpus entry matching the sentence");
  run->add_option("--rep", rep, "image representation")->check(CLI::IsMember({"A", "B"}));
  run->add_option("--seed", seed, "planner seed");
  run->add_option("--report", report, "write the JSON report here");
  run->add_option("--corpus", corpus, "corpus used to look up fixtures and targets");
  run->add_flag("--timings", timings, "include wall-clock stage timings in the report");
  run_flags.add(*run);

  auto* ev = app.add_subcommand("eval", "aggregate records or evaluate a corpus in simulation");
  std::string eval_corpus, mode = "records", eval_report, group = "category";
  std::string scene_dir = (pipeline::default_data_dir() / "scenes").string();
  std::uint64_t eval_seed = 0;
  CodegenFlags eval_flags;
  ev->add_option("--corpus", eval_corpus, "records file (records mode) or corpus file (live-sim mode)")->required();
  ev->add_option("--mode", mode, "evaluation mode")->check(CLI::IsMember({"records", "live-sim"}));
  ev->add_option("--report", eval_report, "write CSV, or JSON when the name ends in .json");
  ev->add_option("--group", group, "row grouping for four-stage tables")->check(CLI::IsMember({"category", "scene"}));
  ev->add_option("--scenes", scene_dir, "scene directory for live-sim");
  ev->add_option("--seed", eval_seed, "planner seed");
  eval_flags.add(*ev);

  auto* serve = app.add_subcommand("serve", "serve the HTTP API and WebSocket pose stream");
  unsigned short port = 8080;
  std::vector<std::string> scenes;
  std::string address = "127.0.0.1", serve_corpus = default_corpus;
  std::uint64_t serve_seed = 0;
  CodegenFlags serve_flags;
  serve->add_option("--port", port, "listen port");
  serve->add_option("--scene", scenes, "scene file or bundled scene name; repeat for more sessions")->required();
  serve->add_option("--address", address, "listen address");
  serve->add_option("--corpus", serve_corpus, "corpus used to look up fixtures and targets");
  serve->add_option("--seed", serve_seed, "planner seed");
  serve_flags.add(*serve);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(scene, text, fixture, rep, seed, report, corpus, run_flags, timings);
    if (*ev) return cmd_eval(eval_corpus, mode, eval_report, group, scene_dir, eval_seed, eval_flags);
    return cmd_serve(port, scenes, address, serve_corpus, serve_seed, serve_flags);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
