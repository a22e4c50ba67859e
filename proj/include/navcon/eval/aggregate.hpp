#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "navcon/eval/records.hpp"

namespace navcon::eval {

enum class Grouping { Category, Scene, Representation };

inline const char* to_string(Grouping g) {
  switch (g) {
    case Grouping::Category: return "category";
    case Grouping::Scene: return "scene";
    case Grouping::Representation: return "representation";
  }
  return "category";
}

inline Grouping grouping_from(std::string_view s) {
  for (Grouping g : {Grouping::Category, Grouping::Scene, Grouping::Representation})
    if (s == to_string(g)) return g;
  throw Error("unknown grouping: " + std::string(s));
}

/// Percentage held as hundredths of a percent so rounding is exact.
struct Percent {
  std::int64_t hundredths = 0;

  /// 100 * passes / count rounded half-up at the second decimal.
  static Percent of(std::int64_t passes, std::int64_t count) {
    if (count <= 0) throw Error("percentage of an empty group");
    return {(2 * 10000 * passes + count) / (2 * count)};
  }

  /// Shortest form: "90", "87.5", "66.67".
  [[nodiscard]] std::string str() const {
    auto s = fixed();
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
  }

  /// Always two decimals, for CSV.
  [[nodiscard]] std::string fixed() const {
    const auto frac = hundredths % 100;
    return std::to_string(hundredths / 100) + "." + (frac < 10 ? "0" : "") + std::to_string(frac);
  }

  static Percent parse(std::string_view s) {
    const auto dot = s.find('.');
    const std::string whole(s.substr(0, dot));
    std::string frac = dot == std::string_view::npos ? "" : std::string(s.substr(dot + 1));
    if (whole.empty() || frac.size() > 2 || whole.find_first_not_of("0123456789") != std::string::npos ||
        frac.find_first_not_of("0123456789") != std::string::npos)
      throw Error("malformed percentage: " + std::string(s));
    frac.resize(2, '0');
    return {std::stoll(whole) * 100 + std::stoll(frac)};
  }

  friend bool operator==(const Percent&, const Percent&) = default;
};

struct AggregateRow {
  std::string group;
  std::int64_t count = 0;
  std::vector<Percent> pct;

  friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

struct AggregateTable {
  Grouping grouping = Grouping::Category;
  std::vector<std::string> columns;  // code, od, wp, path_exec; or a, b
  std::vector<AggregateRow> rows;     // groups in fixed order, then Total

  [[nodiscard]] const AggregateRow* row(std::string_view group) const {
    for (const auto& r : rows)
      if (r.group == group) return &r;
    return nullptr;
  }

  friend bool operator==(const AggregateTable&, const AggregateTable&) = default;
};

inline const std::vector<std::string>& stage_columns() {
  static const std::vector<std::string> c{"code", "od", "wp", "path_exec"};
  return c;
}

inline const std::vector<std::string>& representation_columns() {
  static const std::vector<std::string> c{"a", "b"};
  return c;
}

/// Stage pass rates per group. Categories follow the fixed category order, scenes their first appearance.
/// Representation grouping takes A/B records and reports them per category.
inline AggregateTable aggregate(const std::vector<StageRecord>& records, Grouping grouping) {
  if (records.empty()) throw Error("nothing to aggregate");
  const std::size_t width = records.front().stages.size();
  for (const auto& r : records)
    if (r.stages.size() != width) throw Error("cannot aggregate four-stage and A/B records together");
  if ((grouping == Grouping::Representation) != (width == 2))
    throw Error(grouping == Grouping::Representation ? "representation grouping needs A/B records"
                                                     : "A/B records aggregate only by representation");

  std::vector<std::string> groups;
  auto key = [&](const StageRecord& r) {
    return grouping == Grouping::Scene ? r.scene : std::string(pipeline::to_string(r.category));
  };
  if (grouping == Grouping::Scene) {
    for (const auto& r : records)
      if (std::find(groups.begin(), groups.end(), r.scene) == groups.end()) groups.push_back(r.scene);
  } else {
    for (Category c : pipeline::kCategories) groups.emplace_back(pipeline::to_string(c));
  }

  AggregateTable t;
  t.grouping = grouping;
  t.columns = width == 2 ? representation_columns() : stage_columns();
  auto make_row = [&](const std::string& name, auto&& member) {
    AggregateRow row{name, 0, {}};
    std::vector<std::int64_t> passes(width, 0);
    for (const auto& r : records) {
      if (!member(r)) continue;
      ++row.count;
      for (std::size_t i = 0; i < width; ++i) passes[i] += r.stages[i] ? 1 : 0;
    }
    if (row.count == 0) return;
    for (auto p : passes) row.pct.push_back(Percent::of(p, row.count));
    t.rows.push_back(std::move(row));
  };
  for (const auto& g : groups) make_row(g, [&](const StageRecord& r) { return key(r) == g; });
  make_row("Total", [](const StageRecord&) { return true; });
  return t;
}

inline std::string to_csv(const AggregateTable& t) {
  std::string out = "group,count";
  for (const auto& c : t.columns) out += "," + c + "_pct";
  out += "\n";
  for (const auto& r : t.rows) {
    out += r.group + "," + std::to_string(r.count);
    for (const auto& p : r.pct) out += "," + p.fixed();
    out += "\n";
  }
  return out;
}

inline nlohmann::json to_json(const AggregateTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json pct = nlohmann::json::object();
    for (std::size_t i = 0; i < t.columns.size(); ++i) pct[t.columns[i]] = r.pct.at(i).fixed();
    rows.push_back({{"group", r.group}, {"count", r.count}, {"pct", pct}});
  }
  return {{"grouping", to_string(t.grouping)}, {"columns", t.columns}, {"rows", rows}};
}

inline AggregateTable table_from_json(const nlohmann::json& j) {
  try {
    AggregateTable t;
    t.grouping = grouping_from(j.at("grouping").get<std::string>());
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
      AggregateRow row{r.at("group").get<std::string>(), r.at("count").get<std::int64_t>(), {}};
      for (const auto& c : t.columns) row.pct.push_back(Percent::parse(r.at("pct").at(c).get<std::string>()));
      t.rows.push_back(std::move(row));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("aggregate table: ") + e.what());
  }
}

enum class ReportFormat { Csv, Json };

/// Writes the table, and for JSON also the records it came from.
inline void emit_report(const AggregateTable& table, const std::vector<StageRecord>& records, ReportFormat format,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write report " + path.string());
  if (format == ReportFormat::Csv) {
    out << to_csv(table);
  } else {
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : records) recs.push_back(to_json(r));
    out << nlohmann::json{{"table", to_json(table)}, {"records", recs}}.dump(2) << "\n";
  }
  if (!out) throw Error("failed writing report " + path.string());
}

}  // namespace navcon::eval
