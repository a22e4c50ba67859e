#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "navcon/error.hpp"
#include "navcon/text.hpp"
#include "navcon/world/geometry.hpp"

namespace navcon::world {

struct SceneObject {
  std::string id;
  std::string label;
  std::vector<std::string> synonyms;
  std::vector<std::string> attributes;
  Box3 box;
  /// Id of the object this one rests on (backpack on chair).
  std::optional<std::string> support_of;

  [[nodiscard]] bool has_attribute(std::string_view property) const {
    const auto p = text::lower(property);
    return std::any_of(attributes.begin(), attributes.end(),
                       [&](const std::string& a) { return text::lower(a) == p; });
  }
};

/// Solid ground from z = 0 up to a per-cell height.
struct Terrain {
  enum class Kind { None, Flat, Heightfield };
  Kind kind = Kind::Flat;
  double cell_size = 1.0;
  int cols = 0;
  int rows = 0;
  std::vector<double> heights;  // rows * cols, row = y cell
  double flat_height = 0.1;

  [[nodiscard]] double height_at(double x, double y) const {
    switch (kind) {
      case Kind::None: return 0.0;
      case Kind::Flat: return flat_height;
      case Kind::Heightfield: {
        const int c = std::clamp(static_cast<int>(std::floor(x / cell_size)), 0, cols - 1);
        const int r = std::clamp(static_cast<int>(std::floor(y / cell_size)), 0, rows - 1);
        return heights[static_cast<std::size_t>(r * cols + c)];
      }
    }
    return 0.0;
  }

  /// Terrain as solid boxes (one per heightfield cell, one slab when flat).
  [[nodiscard]] std::vector<Box3> solids(Vec3 extent) const {
    std::vector<Box3> out;
    if (kind == Kind::Flat) {
      out.push_back({{0, 0, 0}, {extent.x, extent.y, flat_height}});
    } else if (kind == Kind::Heightfield) {
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
          const double h = heights[static_cast<std::size_t>(r * cols + c)];
          if (h <= 0.0) continue;
          out.push_back({{c * cell_size, r * cell_size, 0.0},
                         {std::min(extent.x, (c + 1) * cell_size),
                          std::min(extent.y, (r + 1) * cell_size), h}});
        }
    }
    return out;
  }
};

struct CameraModel {
  std::string name;
  double yaw_offset = 0.0;  // radians, relative to robot heading
  int width = 640;
  int height = 480;
  double hfov_deg = 90.0;
  double mount_height = 0.6;  // optical center above ground support
  double max_range = 30.0;

  [[nodiscard]] double fx() const { return (width / 2.0) / std::tan(deg2rad(hfov_deg) / 2.0); }
  [[nodiscard]] double fy() const { return fx(); }
  [[nodiscard]] double cx() const { return width / 2.0; }
  [[nodiscard]] double cy() const { return height / 2.0; }
  [[nodiscard]] double vfov_deg() const {
    return 2.0 * std::atan(cy() / fy()) * 180.0 / kPi;
  }
};

/// left / front / right, in that order.
struct CameraRig {
  std::array<CameraModel, 3> cameras;

  static CameraRig standard(int width = 640, int height = 480, double hfov_deg = 90.0,
                            double mount_height = 0.6, double max_range = 30.0) {
    CameraRig rig;
    const std::array<std::pair<const char*, double>, 3> mounts{
        {{"left", kPi / 2}, {"front", 0.0}, {"right", -kPi / 2}}};
    for (std::size_t i = 0; i < 3; ++i)
      rig.cameras[i] = CameraModel{mounts[i].first, mounts[i].second, width,     height,
                                   hfov_deg,        mount_height,     max_range};
    return rig;
  }

  [[nodiscard]] std::optional<std::size_t> index_of(std::string_view frame) const {
    for (std::size_t i = 0; i < cameras.size(); ++i)
      if (cameras[i].name == frame) return i;
    return std::nullopt;
  }
};

struct QaFixture {
  std::string object_id;  // "*" for entries not tied to an object
  std::string question;   // normalized
  std::string answer;
};

struct ConfusionPair {
  std::string label;  // true label
  std::string as;     // label the detector reports instead
  double prob = 1.0;
};

struct DetectorNoise {
  double miss_prob = 0.0;
  std::vector<ConfusionPair> confusions;
  std::uint64_t seed = 0;

  [[nodiscard]] bool noiseless() const { return miss_prob <= 0.0 && confusions.empty(); }
};

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  friend bool operator==(const Pose2&, const Pose2&) = default;
};

struct Footprint {
  double width = 0.5;
  double length = 1.1;
  double height = 0.7;
};

struct SceneSpec {
  std::string name;
  Vec3 extent{10, 10, 3};
  double resolution = 0.1;
  Terrain terrain;
  std::vector<SceneObject> objects;
  Pose2 robot_start;
  Footprint robot;
  double speed_limit = 1.0;
  CameraRig cameras = CameraRig::standard();
  std::vector<QaFixture> qa_fixtures;
  DetectorNoise detector_noise;

  [[nodiscard]] const SceneObject* find_object(std::string_view id) const {
    for (const auto& o : objects)
      if (o.id == id) return &o;
    return nullptr;
  }

  [[nodiscard]] std::optional<std::string> qa_answer(std::string_view object_id,
                                                     std::string_view question) const {
    const auto q = text::normalize_question(question);
    for (const auto& f : qa_fixtures)
      if (f.object_id == object_id && f.question == q) return f.answer;
    return std::nullopt;
  }
};

/// Attribute membership, case-insensitive. Throws on unknown ids.
inline bool attribute_oracle(const SceneSpec& scene, std::string_view object_id,
                             std::string_view property) {
  const auto* obj = scene.find_object(object_id);
  if (obj == nullptr) throw Error("unknown object id: " + std::string(object_id));
  return obj->has_attribute(property);
}

/// Checks every scene invariant; throws SceneError naming the offending field.
inline void validate_scene(const SceneSpec& s) {
  if (s.name.empty()) throw SceneError("/name", "must be non-empty");
  if (!(s.resolution > 0.0)) throw SceneError("/resolution", "must be positive");
  if (!(s.extent.x > 0 && s.extent.y > 0 && s.extent.z > 0))
    throw SceneError("/extent", "must be positive");
  for (int a = 0; a < 3; ++a) {
    const double cells = s.extent[a] / s.resolution;
    if (std::abs(cells - std::round(cells)) > 1e-6)
      throw SceneError("/extent", "must be a multiple of the resolution");
  }
  if (s.terrain.kind == Terrain::Kind::Heightfield) {
    if (s.terrain.rows <= 0 || s.terrain.cols <= 0 ||
        s.terrain.heights.size() != static_cast<std::size_t>(s.terrain.rows * s.terrain.cols))
      throw SceneError("/terrain", "heightfield dimensions mismatch");
    for (double h : s.terrain.heights)
      if (h < 0.0 || h > s.extent.z) throw SceneError("/terrain", "height outside extent");
  }
  const Box3 bounds{{0, 0, 0}, s.extent};
  const double eps = 1e-9;
  for (std::size_t i = 0; i < s.objects.size(); ++i) {
    const auto& o = s.objects[i];
    const auto where = "/objects/" + std::to_string(i);
    if (o.id.empty()) throw SceneError(where + "/id", "must be non-empty");
    if (o.label.empty()) throw SceneError(where + "/label", "must be non-empty");
    if (!o.box.valid()) throw SceneError(where + "/box", "min exceeds max for object " + o.id);
    if (!bounds.contains(o.box.min, eps) || !bounds.contains(o.box.max, eps))
      throw SceneError(where + "/box", "object " + o.id + " lies outside the map extent");
    for (std::size_t j = 0; j < i; ++j)
      if (s.objects[j].id == o.id) throw SceneError(where + "/id", "duplicate id " + o.id);
  }
  for (std::size_t i = 0; i < s.objects.size(); ++i) {
    const auto& o = s.objects[i];
    if (!o.support_of) continue;
    const auto where = "/objects/" + std::to_string(i) + "/support_of";
    const auto* base = s.find_object(*o.support_of);
    if (base == nullptr) throw SceneError(where, "unknown object " + *o.support_of);
    if (std::abs(o.box.min.z - base->box.max.z) > s.resolution + eps)
      throw SceneError(where, "object " + o.id + " is not in vertical contact with " + base->id);
  }
  if (!(s.robot.width > 0 && s.robot.length > 0 && s.robot.height > 0))
    throw SceneError("/robot", "footprint must be positive");
  const auto& p = s.robot_start;
  if (p.x < 0 || p.y < 0 || p.x > s.extent.x || p.y > s.extent.y)
    throw SceneError("/robot_start", "outside map extent");
  const double ground = s.terrain.height_at(p.x, p.y);
  if (ground + s.robot.height > s.extent.z)
    throw SceneError("/robot_start", "no headroom above terrain");
  const double r = s.robot.width / 2;
  const Box3 body{{p.x - r, p.y - r, ground + 0.05}, {p.x + r, p.y + r, ground + s.robot.height}};
  for (const auto& o : s.objects)
    if (body.overlaps(o.box)) throw SceneError("/robot_start", "robot overlaps object " + o.id);
  if (!(s.detector_noise.miss_prob >= 0.0 && s.detector_noise.miss_prob <= 1.0))
    throw SceneError("/detector_noise/miss_prob", "must lie in [0, 1]");
}

namespace detail {

using nlohmann::json;

inline const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw SceneError(path + "/" + key, "missing field");
  return j.at(key);
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SceneError(path, "expected number");
  return j.get<double>();
}

inline std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SceneError(path, "expected string");
  return j.get<std::string>();
}

inline Vec3 vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw SceneError(path, "expected [x, y, z]");
  return {number(j[0], path + "/0"), number(j[1], path + "/1"), number(j[2], path + "/2")};
}

inline std::vector<std::string> strings(const json& j, const std::string& path) {
  if (!j.is_array()) throw SceneError(path, "expected array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(string(j[i], path + "/" + std::to_string(i)));
  return out;
}

inline std::vector<QaFixture> qa_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw SceneError(path, "expected array");
  std::vector<QaFixture> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = path + "/" + std::to_string(i);
    out.push_back({string(require(j[i], "object_id", p), p + "/object_id"),
                   text::normalize_question(string(require(j[i], "question", p), p + "/question")),
                   string(require(j[i], "answer", p), p + "/answer")});
  }
  return out;
}

}  // namespace detail

/// Loads a QA fixture table: a JSON list of {object_id, question, answer}.
inline std::vector<QaFixture> load_qa_fixtures(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SceneError("", "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw SceneError("", std::string("parse error: ") + e.what());
  }
  return detail::qa_list(j, "");
}

/// Builds a SceneSpec from parsed JSON. `base_dir` resolves relative fixture paths.
inline SceneSpec scene_from_json(const nlohmann::json& j,
                                 const std::filesystem::path& base_dir = {}) {
  using namespace detail;
  if (!j.is_object()) throw SceneError("", "scene must be a JSON object");
  SceneSpec s;
  s.name = string(require(j, "name", ""), "/name");
  s.extent = vec3(require(j, "extent", ""), "/extent");
  s.resolution = number(require(j, "resolution", ""), "/resolution");
  s.terrain.flat_height = s.resolution;

  const json& terrain = require(j, "terrain", "");
  if (terrain.is_string()) {
    const auto kind = terrain.get<std::string>();
    if (kind == "flat") s.terrain.kind = Terrain::Kind::Flat;
    else if (kind == "none") s.terrain.kind = Terrain::Kind::None;
    else throw SceneError("/terrain", "unknown terrain kind " + kind);
  } else if (terrain.is_object()) {
    const json& hf = require(terrain, "heightfield", "/terrain");
    s.terrain.kind = Terrain::Kind::Heightfield;
    s.terrain.cell_size = number(require(hf, "cell_size", "/terrain/heightfield"),
                                 "/terrain/heightfield/cell_size");
    const json& rows = require(hf, "heights", "/terrain/heightfield");
    if (!rows.is_array() || rows.empty())
      throw SceneError("/terrain/heightfield/heights", "expected non-empty rows");
    s.terrain.rows = static_cast<int>(rows.size());
    s.terrain.cols = rows[0].is_array() ? static_cast<int>(rows[0].size()) : 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto p = "/terrain/heightfield/heights/" + std::to_string(r);
      if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != s.terrain.cols)
        throw SceneError(p, "ragged heightfield row");
      for (std::size_t c = 0; c < rows[r].size(); ++c)
        s.terrain.heights.push_back(number(rows[r][c], p + "/" + std::to_string(c)));
    }
  } else {
    throw SceneError("/terrain", "expected \"flat\", \"none\" or {heightfield}");
  }

  const json& start = require(j, "robot_start", "");
  s.robot_start = {number(require(start, "x", "/robot_start"), "/robot_start/x"),
                   number(require(start, "y", "/robot_start"), "/robot_start/y"),
                   start.contains("yaw") ? number(start["yaw"], "/robot_start/yaw") : 0.0};

  if (j.contains("robot")) {
    const json& r = j["robot"];
    if (r.contains("width")) s.robot.width = number(r["width"], "/robot/width");
    if (r.contains("length")) s.robot.length = number(r["length"], "/robot/length");
    if (r.contains("height")) s.robot.height = number(r["height"], "/robot/height");
    if (r.contains("speed_limit")) s.speed_limit = number(r["speed_limit"], "/robot/speed_limit");
  }

  if (j.contains("cameras")) {
    const json& c = j["cameras"];
    auto get = [&](const char* key, double def) {
      return c.contains(key) ? number(c[key], std::string("/cameras/") + key) : def;
    };
    s.cameras = CameraRig::standard(static_cast<int>(get("width", 640)),
                                    static_cast<int>(get("height", 480)), get("hfov_deg", 90.0),
                                    get("mount_height", 0.6), get("max_range", 30.0));
  }

  const json& objects = require(j, "objects", "");
  if (!objects.is_array()) throw SceneError("/objects", "expected array");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto p = "/objects/" + std::to_string(i);
    const json& o = objects[i];
    SceneObject obj;
    obj.id = string(require(o, "id", p), p + "/id");
    obj.label = string(require(o, "label", p), p + "/label");
    if (o.contains("synonyms")) obj.synonyms = strings(o["synonyms"], p + "/synonyms");
    if (o.contains("attributes")) obj.attributes = strings(o["attributes"], p + "/attributes");
    const json& box = require(o, "box", p);
    obj.box = {vec3(require(box, "min", p + "/box"), p + "/box/min"),
               vec3(require(box, "max", p + "/box"), p + "/box/max")};
    if (o.contains("support_of") && !o["support_of"].is_null())
      obj.support_of = string(o["support_of"], p + "/support_of");
    s.objects.push_back(std::move(obj));
  }

  if (j.contains("qa_fixtures")) {
    const json& qa = j["qa_fixtures"];
    if (qa.is_string()) s.qa_fixtures = load_qa_fixtures(base_dir / qa.get<std::string>());
    else s.qa_fixtures = qa_list(qa, "/qa_fixtures");
  }

  if (j.contains("detector_noise")) {
    const json& n = j["detector_noise"];
    if (n.contains("miss_prob")) s.detector_noise.miss_prob = number(n["miss_prob"], "/detector_noise/miss_prob");
    if (n.contains("seed")) s.detector_noise.seed = n["seed"].get<std::uint64_t>();
    if (n.contains("confusions")) {
      const json& cs = n["confusions"];
      for (std::size_t i = 0; i < cs.size(); ++i) {
        const auto p = "/detector_noise/confusions/" + std::to_string(i);
        s.detector_noise.confusions.push_back(
            {string(require(cs[i], "label", p), p + "/label"), string(require(cs[i], "as", p), p + "/as"),
             cs[i].contains("prob") ? number(cs[i]["prob"], p + "/prob") : 1.0});
      }
    }
  }

  validate_scene(s);
  return s;
}

inline SceneSpec load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SceneError("", "cannot open scene file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw SceneError("", std::string("parse error: ") + e.what());
  }
  return scene_from_json(j, path.parent_path());
}

inline nlohmann::json scene_to_json(const SceneSpec& s) {
  using nlohmann::json;
  json j;
  j["name"] = s.name;
  j["extent"] = {s.extent.x, s.extent.y, s.extent.z};
  j["resolution"] = s.resolution;
  switch (s.terrain.kind) {
    case Terrain::Kind::Flat: j["terrain"] = "flat"; break;
    case Terrain::Kind::None: j["terrain"] = "none"; break;
    case Terrain::Kind::Heightfield: {
      json rows = json::array();
      for (int r = 0; r < s.terrain.rows; ++r) {
        json row = json::array();
        for (int c = 0; c < s.terrain.cols; ++c)
          row.push_back(s.terrain.heights[static_cast<std::size_t>(r * s.terrain.cols + c)]);
        rows.push_back(row);
      }
      j["terrain"] = {{"heightfield", {{"cell_size", s.terrain.cell_size}, {"heights", rows}}}};
    }
  }
  j["robot_start"] = {{"x", s.robot_start.x}, {"y", s.robot_start.y}, {"yaw", s.robot_start.yaw}};
  j["robot"] = {{"width", s.robot.width}, {"length", s.robot.length}, {"height", s.robot.height},
                {"speed_limit", s.speed_limit}};
  const auto& cam = s.cameras.cameras[1];
  j["cameras"] = {{"width", cam.width}, {"height", cam.height}, {"hfov_deg", cam.hfov_deg},
                  {"mount_height", cam.mount_height}, {"max_range", cam.max_range}};
  json objs = json::array();
  for (const auto& o : s.objects) {
    json jo{{"id", o.id}, {"label", o.label}, {"synonyms", o.synonyms}, {"attributes", o.attributes},
            {"box", {{"min", {o.box.min.x, o.box.min.y, o.box.min.z}},
                     {"max", {o.box.max.x, o.box.max.y, o.box.max.z}}}}};
    if (o.support_of) jo["support_of"] = *o.support_of;
    objs.push_back(std::move(jo));
  }
  j["objects"] = objs;
  json qa = json::array();
  for (const auto& f : s.qa_fixtures)
    qa.push_back({{"object_id", f.object_id}, {"question", f.question}, {"answer", f.answer}});
  j["qa_fixtures"] = qa;
  json conf = json::array();
  for (const auto& c : s.detector_noise.confusions)
    conf.push_back({{"label", c.label}, {"as", c.as}, {"prob", c.prob}});
  j["detector_noise"] = {{"miss_prob", s.detector_noise.miss_prob},
                         {"seed", s.detector_noise.seed},
                         {"confusions", conf}};
  return j;
}

}  // namespace navcon::world
