#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "navcon/pipeline/command.hpp"
#include "navcon/text.hpp"

namespace navcon::pipeline {

/// One simulated evaluation sentence: where it runs, which fixture answers it, what it should reach.
struct CorpusEntry {
  std::string id;  // also the fixture id, "<scene>/<name>"
  std::string scene;
  Category category = Category::Generic;
  std::string text;
  std::optional<std::string> target;
  Representation representation = Representation::A;
  bool cross_frame = false;  // member of the cross-frame relational sub-corpus

  [[nodiscard]] NavCommand command() const { return {text, category, scene, representation, id, target}; }
};

inline std::vector<CorpusEntry> corpus_from_json(const nlohmann::json& j) {
  const auto& list = j.is_object() ? j.at("entries") : j;
  if (!list.is_array()) throw Error("corpus: expected a list of entries");
  std::vector<CorpusEntry> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& e = list[i];
    const auto where = "corpus entry " + std::to_string(i);
    try {
      CorpusEntry c;
      c.id = e.at("id").get<std::string>();
      c.scene = e.at("scene").get<std::string>();
      c.category = category_from(e.at("category").get<std::string>());
      c.text = e.at("text").get<std::string>();
      if (e.contains("target") && !e["target"].is_null()) c.target = e["target"].get<std::string>();
      if (e.contains("representation")) c.representation = projection::representation_from(e["representation"].get<std::string>());
      c.cross_frame = e.value("cross_frame", false);
      if (!seen.insert(c.id + "|" + projection::to_string(c.representation)).second)
        throw Error("duplicate id " + c.id);
      out.push_back(std::move(c));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(where + ": " + ex.what());
    } catch (const Error& ex) {
      throw Error(where + ": " + ex.what());
    }
  }
  return out;
}

inline std::vector<CorpusEntry> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus " + path.string());
  try {
    return corpus_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("corpus " + path.string() + ": " + e.what());
  }
}

/// Corpus entry for a typed sentence in a scene, matched case- and punctuation-insensitively.
inline const CorpusEntry* find_entry(const std::vector<CorpusEntry>& corpus, std::string_view scene,
                                     std::string_view text) {
  const auto want = text::tokens(text);
  for (const auto& e : corpus)
    if (e.scene == scene && text::tokens(e.text) == want) return &e;
  return nullptr;
}

}  // namespace navcon::pipeline
