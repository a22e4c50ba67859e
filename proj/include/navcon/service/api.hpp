#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "navcon/pipeline/corpus.hpp"
#include "navcon/pipeline/run.hpp"
#include "navcon/world/render.hpp"

namespace navcon::service {

using nlohmann::json;

struct ApiRequest {
  std::string method;  // "GET", "POST", ...
  std::string target;  // path with optional query string
  std::string body;
};

struct ApiResponse {
  int status = 200;
  json body;
};

/// One robot session and its serialization state.
struct SessionSlot {
  explicit SessionSlot(world::World w) : session(std::move(w)) {}

  pipeline::Session session;
  std::mutex mutex;
  bool busy = false;
  std::optional<json> last_report;
};

/// Pose events for one finished command. The sink owns `release` and must call it exactly once,
/// after which the session accepts the next command.
using EventSink = std::function<void(const std::string& scene, std::vector<pipeline::FollowEvent> events,
                                     std::function<void()> release)>;

/// Sessions keyed by scene name, plus everything a command needs besides the world.
class SessionHub {
 public:
  SessionHub(pipeline::PipelineConfig cfg, std::vector<pipeline::CorpusEntry> corpus)
      : cfg_(std::move(cfg)), corpus_(std::move(corpus)) {}

  void add(world::World w) {
    const auto name = w.scene->name;
    if (default_scene_.empty()) default_scene_ = name;
    slots_[name] = std::make_unique<SessionSlot>(std::move(w));
  }

  [[nodiscard]] SessionSlot* find(std::string_view scene) {
    const auto it = slots_.find(std::string(scene.empty() ? default_scene_ : scene));
    return it == slots_.end() ? nullptr : it->second.get();
  }

  [[nodiscard]] const std::string& default_scene() const { return default_scene_; }
  [[nodiscard]] std::vector<std::string> scenes() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : slots_) out.push_back(name);
    return out;
  }
  [[nodiscard]] const pipeline::PipelineConfig& config() const { return cfg_; }
  [[nodiscard]] const std::vector<pipeline::CorpusEntry>& corpus() const { return corpus_; }

  void set_event_sink(EventSink sink) { sink_ = std::move(sink); }
  [[nodiscard]] const EventSink& event_sink() const { return sink_; }

 private:
  pipeline::PipelineConfig cfg_;
  std::vector<pipeline::CorpusEntry> corpus_;
  std::map<std::string, std::unique_ptr<SessionSlot>> slots_;
  std::string default_scene_;
  EventSink sink_;
};

namespace detail {

inline std::string url_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+') {
      out += ' ';
    } else if (s[i] == '%' && i + 2 < s.size() && std::isxdigit(static_cast<unsigned char>(s[i + 1])) &&
               std::isxdigit(static_cast<unsigned char>(s[i + 2]))) {
      out += static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16));
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

struct Target {
  std::string path;
  std::map<std::string, std::string> query;
};

inline Target split_target(std::string_view target) {
  Target t;
  const auto q = target.find('?');
  t.path = std::string(target.substr(0, q));
  if (q == std::string_view::npos) return t;
  std::string_view rest = target.substr(q + 1);
  while (!rest.empty()) {
    const auto amp = rest.find('&');
    const auto pair = rest.substr(0, amp);
    const auto eq = pair.find('=');
    if (eq == std::string_view::npos)
      t.query[url_decode(pair)] = "";
    else
      t.query[url_decode(pair.substr(0, eq))] = url_decode(pair.substr(eq + 1));
    if (amp == std::string_view::npos) break;
    rest = rest.substr(amp + 1);
  }
  return t;
}

inline ApiResponse error(int status, std::string message) { return {status, json{{"error", std::move(message)}}}; }

inline json box_json(const world::Box2& b) { return json::array({b.left, b.lower, b.right, b.upper}); }

}  // namespace detail

/// Occupancy as run lengths over cells in x-fastest, then y, then z order. Runs alternate free and
/// occupied and always start with a free run, which may be empty.
inline json map_payload(const world::VoxelMap& map) {
  json runs = json::array();
  bool current = false;
  std::int64_t len = 0;
  const auto& d = map.dims();
  for (int z = 0; z < d[2]; ++z)
    for (int y = 0; y < d[1]; ++y)
      for (int x = 0; x < d[0]; ++x) {
        const bool occ = map.occupied(x, y, z);
        if (occ != current) {
          runs.push_back(len);
          current = occ;
          len = 0;
        }
        ++len;
      }
  runs.push_back(len);
  return {{"dims", d}, {"resolution", map.resolution()}, {"order", "xyz"}, {"first", "free"}, {"runs", runs}};
}

inline json views_payload(const world::ViewSet& views, const world::SceneSpec& scene) {
  json frames = json::array();
  for (const auto& f : views.frames) {
    json rects = json::array();
    for (const auto& r : f.rects) {
      const auto* obj = scene.find_object(r.object_id);
      rects.push_back({{"object_id", r.object_id},
                       {"label", obj != nullptr ? obj->label : r.object_id},
                       {"box", detail::box_json(r.box)},
                       {"distance", r.distance},
                       {"visible_fraction", r.visible_fraction}});
    }
    frames.push_back({{"name", f.name()}, {"width", f.camera.width}, {"height", f.camera.height}, {"rects", rects}});
  }
  const projection::PanoramaLayout layout;
  json offsets = json::object();
  for (std::size_t i = 0; i < layout.order.size(); ++i) offsets[layout.order[i]] = layout.offset(i);
  return {{"frames", frames},
          {"panorama", {{"width", layout.total_width()}, {"height", layout.frame_height}, {"offsets", offsets}}}};
}

inline json event_json(const std::string& scene, const pipeline::FollowEvent& e) {
  return {{"type", "pose"},        {"scene", scene},       {"pose", pipeline::to_json(e.pose)},
          {"progress", e.progress}, {"sim_time", e.sim_time}, {"done", e.done},
          {"success", e.success}};
}

namespace detail {

inline ApiResponse post_command(SessionHub& hub, const std::string& body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error&) {
    return error(400, "body is not valid JSON");
  }
  if (!j.is_object() || !j.contains("text") || !j["text"].is_string() || j["text"].get<std::string>().empty())
    return error(400, "body needs a non-empty string field \"text\"");
  for (const char* key : {"scene", "representation", "fixture"})
    if (j.contains(key) && !j[key].is_string()) return error(400, std::string("field \"") + key + "\" must be a string");

  const std::string scene = j.value("scene", hub.default_scene());
  SessionSlot* slot = hub.find(scene);
  if (slot == nullptr) return error(404, "unknown scene " + scene);

  pipeline::NavCommand cmd;
  cmd.text = j["text"].get<std::string>();
  cmd.scene = scene.empty() ? hub.default_scene() : scene;
  try {
    if (j.contains("representation")) cmd.representation = projection::representation_from(j["representation"].get<std::string>());
  } catch (const Error& e) {
    return error(400, e.what());
  }
  if (const auto* entry = pipeline::find_entry(hub.corpus(), cmd.scene, cmd.text)) {
    cmd.category = entry->category;
    cmd.fixture = entry->id;
    cmd.target = entry->target;
  }
  if (j.contains("fixture")) cmd.fixture = j["fixture"].get<std::string>();

  {
    std::lock_guard lock(slot->mutex);
    if (slot->busy) return error(409, "a command is already executing in session " + cmd.scene);
    slot->busy = true;
  }
  pipeline::Session working = slot->session;
  std::vector<pipeline::FollowEvent> events;
  json report;
  try {
    const auto rep = pipeline::run_command(cmd, working, hub.config(),
                                           [&](const pipeline::FollowEvent& e) { events.push_back(e); });
    report = pipeline::to_json(rep);
  } catch (const std::exception& e) {
    std::lock_guard lock(slot->mutex);
    slot->busy = false;
    return error(500, e.what());
  }
  {
    std::lock_guard lock(slot->mutex);
    slot->session.robot = working.robot;
    slot->last_report = report;
  }
  auto release = [slot] {
    std::lock_guard lock(slot->mutex);
    slot->busy = false;
  };
  if (hub.event_sink() && !events.empty())
    hub.event_sink()(cmd.scene, std::move(events), release);
  else
    release();
  return {200, std::move(report)};
}

}  // namespace detail

/// Routes one request. Pure with respect to the transport: the server only moves bytes.
inline ApiResponse handle_api(SessionHub& hub, const ApiRequest& req) {
  const auto t = detail::split_target(req.target);
  const bool get = req.method == "GET";
  if (t.path == "/api/command") {
    if (req.method != "POST") return detail::error(405, "use POST");
    return detail::post_command(hub, req.body);
  }
  if (t.path != "/api/state" && t.path != "/api/views" && t.path != "/api/map" && t.path != "/api/scenes")
    return detail::error(404, "no route " + t.path);
  if (!get) return detail::error(405, "use GET");
  if (t.path == "/api/scenes") return {200, json{{"scenes", hub.scenes()}, {"default", hub.default_scene()}}};

  const auto it = t.query.find("scene");
  const std::string scene = it == t.query.end() ? hub.default_scene() : it->second;
  SessionSlot* slot = hub.find(scene);
  if (slot == nullptr) return detail::error(404, "unknown scene " + scene);
  std::lock_guard lock(slot->mutex);
  const auto& world = slot->session.world;
  if (t.path == "/api/state") {
    return {200, json{{"scene", world.scene->name},
                      {"pose", pipeline::to_json(slot->session.robot.pose)},
                      {"busy", slot->busy},
                      {"last_report", slot->last_report.value_or(json(nullptr))}}};
  }
  if (t.path == "/api/views") {
    const auto views = world::render_views(*world.scene, *world.map, slot->session.robot);
    auto body = views_payload(views, *world.scene);
    body["scene"] = world.scene->name;
    return {200, std::move(body)};
  }
  auto body = map_payload(*world.map);
  body["scene"] = world.scene->name;
  return {200, std::move(body)};
}

}  // namespace navcon::service
