#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "navcon/eval/aggregate.hpp"
#include "navcon/pipeline/corpus.hpp"
#include "navcon/pipeline/run.hpp"

namespace navcon::eval {

using pipeline::Representation;

struct InvalidEntry {
  std::string id;
  std::string reason;
};

/// Outcome of running a corpus through the simulated pipeline.
struct LiveEval {
  std::vector<StageRecord> records;     // one four-stage record per valid entry
  std::vector<StageRecord> ab_records;  // cross-frame entries: OD pass under A and under B
  std::vector<InvalidEntry> invalid;
  AggregateTable by_category;
  AggregateTable by_scene;
  std::optional<AggregateTable> by_representation;
};

inline StageRecord record_of(const pipeline::CorpusEntry& e, const pipeline::StageOutcomes& s) {
  return {e.scene, e.category, e.text, {s.code.pass, s.od.pass, s.wp.pass, s.path_exec.pass}};
}

/// Runs every entry with a fresh session at the scene start. Entries whose scene, fixture or target
/// annotation cannot be resolved are listed as invalid and left out of the tables.
inline LiveEval run_live_eval(const std::vector<pipeline::CorpusEntry>& corpus, const std::filesystem::path& scene_dir,
                              const pipeline::PipelineConfig& cfg) {
  if (corpus.empty()) throw Error("live evaluation needs a non-empty corpus");
  LiveEval out;
  std::map<std::string, std::optional<world::World>> worlds;
  std::map<std::string, std::string> load_errors;
  auto world_for = [&](const std::string& scene) -> const world::World* {
    auto it = worlds.find(scene);
    if (it == worlds.end()) {
      std::optional<world::World> w;
      try {
        w = world::World::load(scene_dir / (scene + ".json"));
      } catch (const Error& e) {
        load_errors[scene] = e.what();
      }
      it = worlds.emplace(scene, std::move(w)).first;
    }
    return it->second ? &*it->second : nullptr;
  };

  for (const auto& e : corpus) {
    const auto* w = world_for(e.scene);
    if (w == nullptr) {
      out.invalid.push_back({e.id, "scene " + e.scene + ": " + load_errors[e.scene]});
      continue;
    }
    if (!e.target) {
      out.invalid.push_back({e.id, "no target annotation"});
      continue;
    }
    if (w->scene->find_object(*e.target) == nullptr) {
      out.invalid.push_back({e.id, "target " + *e.target + " is not in scene " + e.scene});
      continue;
    }
    if (cfg.codegen.mode == pipeline::CodegenConfig::Mode::Fixture) {
      try {
        pipeline::load_fixture(cfg.codegen, e.id);
      } catch (const Error& ex) {
        out.invalid.push_back({e.id, ex.what()});
        continue;
      }
    }

    auto run_as = [&](Representation rep) {
      pipeline::Session session(*w);
      auto cmd = e.command();
      cmd.representation = rep;
      return pipeline::run_command(cmd, session, cfg).stages;
    };
    const auto primary = run_as(e.representation);
    out.records.push_back(record_of(e, primary));
    if (e.cross_frame) {
      const auto a = e.representation == Representation::A ? primary : run_as(Representation::A);
      const auto b = e.representation == Representation::B ? primary : run_as(Representation::B);
      out.ab_records.push_back({e.scene, e.category, e.text, {a.od.pass, b.od.pass}});
    }
  }
  if (out.records.empty()) throw Error("live evaluation: every corpus entry is invalid");
  out.by_category = aggregate(out.records, Grouping::Category);
  out.by_scene = aggregate(out.records, Grouping::Scene);
  if (!out.ab_records.empty()) out.by_representation = aggregate(out.ab_records, Grouping::Representation);
  return out;
}

inline nlohmann::json to_json(const LiveEval& ev) {
  auto list = [](const std::vector<StageRecord>& rs) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rs) j.push_back(to_json(r));
    return j;
  };
  nlohmann::json invalid = nlohmann::json::array();
  for (const auto& i : ev.invalid) invalid.push_back({{"id", i.id}, {"reason", i.reason}});
  nlohmann::json j{{"records", list(ev.records)},
                   {"ab_records", list(ev.ab_records)},
                   {"invalid", invalid},
                   {"by_category", to_json(ev.by_category)},
                   {"by_scene", to_json(ev.by_scene)}};
  j["by_representation"] = ev.by_representation ? to_json(*ev.by_representation) : nlohmann::json(nullptr);
  return j;
}

}  // namespace navcon::eval
