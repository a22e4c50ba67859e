#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "navcon/error.hpp"
#include "navcon/pipeline/command.hpp"

namespace navcon::eval {

using pipeline::Category;

/// Per-sentence outcome: four staged results (Code, OD, WP, Path&Exec) or a representation pair (A, B).
struct StageRecord {
  std::string scene;
  Category category = Category::Generic;
  std::string sentence;
  std::vector<bool> stages;

  [[nodiscard]] bool four_stage() const { return stages.size() == 4; }

  /// Passes form a prefix: nothing passes after a failure.
  [[nodiscard]] bool monotone() const {
    if (!four_stage()) return true;
    for (std::size_t i = 1; i < stages.size(); ++i)
      if (stages[i] && !stages[i - 1]) return false;
    return true;
  }

  friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

inline const char* pass_fail(bool b) { return b ? "Pass" : "Fail"; }

namespace detail {

inline bool parse_outcome(const nlohmann::json& j, const std::string& where) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "Pass") return true;
    if (s == "Fail") return false;
  }
  throw Error(where + ": outcome must be Pass or Fail");
}

inline std::string describe(std::size_t i, const StageRecord& r) {
  return "record " + std::to_string(i + 1) + " (" + r.scene + ": \"" + r.sentence + "\")";
}

}  // namespace detail

inline std::vector<StageRecord> records_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error("records: expected a list");
  std::vector<StageRecord> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    StageRecord r;
    const auto where = "record " + std::to_string(i + 1);
    try {
      r.scene = e.at("scene").get<std::string>();
      r.category = pipeline::category_from(e.at("category").get<std::string>());
      r.sentence = e.at("sentence").get<std::string>();
      if (e.contains("stages")) {
        const auto& s = e["stages"];
        if (!s.is_array() || s.size() != 4) throw Error(where + ": stages must list four outcomes");
        for (const auto& x : s) r.stages.push_back(detail::parse_outcome(x, where));
      } else {
        r.stages = {detail::parse_outcome(e.at("a"), where), detail::parse_outcome(e.at("b"), where)};
      }
    } catch (const nlohmann::json::exception& ex) {
      throw Error(where + ": " + ex.what());
    }
    if (!r.monotone()) {
      std::string pattern;
      for (bool b : r.stages) pattern += std::string(pattern.empty() ? "" : ",") + pass_fail(b);
      throw Error(detail::describe(i, r) + ": non-monotone stages " + pattern);
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<StageRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open records " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("records " + path.string() + ": " + e.what());
  }
  return records_from_json(j);
}

inline nlohmann::json to_json(const StageRecord& r) {
  nlohmann::json j{{"scene", r.scene}, {"category", pipeline::to_string(r.category)}, {"sentence", r.sentence}};
  if (r.four_stage()) {
    j["stages"] = nlohmann::json::array();
    for (bool b : r.stages) j["stages"].push_back(pass_fail(b));
  } else {
    j["a"] = pass_fail(r.stages.at(0));
    j["b"] = pass_fail(r.stages.at(1));
  }
  return j;
}

}  // namespace navcon::eval
