#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "navcon/projection/panorama.hpp"
#include "navcon/runtime/value.hpp"
#include "navcon/text.hpp"
#include "navcon/world/detector.hpp"
#include "navcon/world/scene.hpp"

namespace navcon::runtime {

using world::Box2;

/// Every patch a run creates, in creation order.
struct PatchRecord {
  int id = 0;
  Box2 bounds;
  std::string frame;               // camera frame, "panorama", or "merged" for the mode-B root
  std::vector<std::size_t> views;  // indices into AssembledViews::views
  int parent = -1;
  std::string origin;              // root, constructor, find, crop
  std::string object_id;           // detection source, if any
};

struct ApiCall {
  std::string name;
  std::string args;
  std::string result;
};

struct ExecutionTrace {
  std::size_t steps_used = 0;
  std::vector<ApiCall> api_calls;
  std::vector<PatchRecord> patch_registry;
  std::vector<std::string> notes;
};

/// Frame name of the mode-B root, which spans all three camera frames.
inline constexpr std::string_view kMergedFrame = "merged";

/// Edge gap between two boxes, or minus their IoU when they overlap.
inline double box_distance(const Box2& a, const Box2& b) {
  const double inter = a.intersection_area(b);
  if (inter > 0.0) return -inter / (a.area() + b.area() - inter);
  const double gx = std::max({0.0, a.left - b.right, b.left - a.right});
  const double gy = std::max({0.0, a.lower - b.upper, b.lower - a.upper});
  return std::hypot(gx, gy);
}

/// Strips everything but digits, '.', and '-'; a range such as "10-15" yields its first value.
inline double coerce_to_numeric(std::string_view s) {
  std::string kept;
  for (char c : s)
    if ((c >= '0' && c <= '9') || c == '.' || c == '-') kept += c;
  for (std::size_t i = 1; i + 1 < kept.size(); ++i) {
    if (kept[i] == '-' && std::isdigit(static_cast<unsigned char>(kept[i - 1])) &&
        std::isdigit(static_cast<unsigned char>(kept[i + 1]))) {
      kept.resize(i);
      break;
    }
  }
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(kept, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0) throw ExecError("coerce_to_numeric: no numeric value in '" + std::string(s) + "'");
  return out;
}

/// Number of distinct tokens of `phrase` found among the object's label and attributes.
inline int description_overlap(std::string_view phrase, const world::SceneObject& obj) {
  std::set<std::string> desc = text::token_set(obj.label);
  for (const auto& a : obj.attributes) {
    auto t = text::token_set(a);
    desc.insert(t.begin(), t.end());
  }
  int n = 0;
  for (const auto& t : text::token_set(phrase)) n += desc.count(t) ? 1 : 0;
  return n;
}

/// Patch operations against one rendered world snapshot.
class PatchSpace {
 public:
  PatchSpace(const world::SceneSpec& scene, const projection::AssembledViews& views, ExecutionTrace& trace)
      : scene_(scene), views_(views), trace_(trace) {}

  [[nodiscard]] const world::SceneSpec& scene() const { return scene_; }
  [[nodiscard]] const projection::AssembledViews& views() const { return views_; }
  [[nodiscard]] projection::Representation mode() const { return views_.mode; }

  [[nodiscard]] const PatchRecord& at(PatchRef p) const {
    if (p.id < 0 || static_cast<std::size_t>(p.id) >= trace_.patch_registry.size())
      throw ExecError("invalid patch handle");
    return trace_.patch_registry[static_cast<std::size_t>(p.id)];
  }

  PatchRef make(Box2 bounds, std::string frame, std::vector<std::size_t> views, int parent, std::string origin,
                std::string object_id = {}) {
    const int id = static_cast<int>(trace_.patch_registry.size());
    trace_.patch_registry.push_back(
        {id, bounds, std::move(frame), std::move(views), parent, std::move(origin), std::move(object_id)});
    return {id};
  }

  /// The whole panorama (mode A) or the merged root over all frames (mode B).
  PatchRef root() {
    if (views_.mode == projection::Representation::A) {
      const auto& v = views_.views.at(0);
      return make(v.bounds(), v.frame, {0}, -1, "root");
    }
    std::vector<std::size_t> all;
    Box2 b{};
    for (std::size_t i = 0; i < views_.views.size(); ++i) {
      all.push_back(i);
      b.right = std::max(b.right, views_.views[i].width);
      b.upper = std::max(b.upper, views_.views[i].height);
    }
    return make(b, std::string(kMergedFrame), all, -1, "root");
  }

  /// Full-view patch for one named frame (mode B) or the panorama.
  PatchRef frame_patch(std::string_view frame, int parent) {
    for (std::size_t i = 0; i < views_.views.size(); ++i)
      if (views_.views[i].frame == frame) return make(views_.views[i].bounds(), views_.views[i].frame, {i}, parent, "constructor");
    throw ExecError("unknown frame: " + std::string(frame));
  }

  PatchRef copy(PatchRef p) {
    const auto rec = at(p);
    return make(rec.bounds, rec.frame, rec.views, rec.id, "constructor", rec.object_id);
  }

  std::vector<PatchRef> find(PatchRef p, std::string_view name) {
    const auto rec = at(p);
    std::vector<PatchRef> out;
    if (rec.bounds.empty()) return out;
    for (std::size_t vi : rec.views) {
      const auto& view = views_.views[vi];
      for (const auto& d : world::detect_in_rects(scene_, view.rects, name, rec.bounds, scene_.detector_noise))
        out.push_back(make(d.box, view.frame, {vi}, rec.id, "find", d.object_id));
    }
    return out;
  }

  bool exists(PatchRef p, std::string_view name) { return !find(p, name).empty(); }

  /// Object with the largest visible-rectangle overlap with the patch; optionally only objects matching `name`.
  [[nodiscard]] const world::SceneObject* dominant(PatchRef p, std::optional<std::string_view> name = {}) const {
    const auto& rec = at(p);
    const world::SceneObject* best = nullptr;
    double best_area = 0.0, best_score = 0.0;
    bool best_source = false;
    for (std::size_t vi : rec.views) {
      for (const auto& r : views_.views[vi].rects) {
        if (!r.center_unoccluded) continue;
        const double area = r.box.intersection_area(rec.bounds);
        if (area <= 0.0) continue;
        const auto* obj = scene_.find_object(r.object_id);
        if (!obj) continue;
        if (name && !world::matches_query(*obj, *name, scene_.detector_noise)) continue;
        const bool source = !rec.object_id.empty() && obj->id == rec.object_id;
        bool better = best == nullptr || area > best_area;
        if (!better && area == best_area) {
          if (source != best_source) better = source;
          else if (r.visible_fraction != best_score) better = r.visible_fraction > best_score;
          else better = obj->id < best->id;
        }
        if (better) {
          best = obj;
          best_area = area;
          best_score = r.visible_fraction;
          best_source = source;
        }
      }
    }
    return best;
  }

  bool verify_property(PatchRef p, std::string_view object_name, std::string_view property) {
    const auto* obj = dominant(p, object_name);
    if (!obj) {
      trace_.notes.push_back("verify_property: no " + std::string(object_name) + " in patch #" +
                             std::to_string(p.id) + ", answering False");
      return false;
    }
    return obj->has_attribute(property);
  }

  std::string best_text_match(PatchRef p, const std::vector<std::string>& options) {
    if (options.empty()) throw ExecError("best_text_match: empty option list");
    const auto* obj = dominant(p);
    if (!obj) return options.front();
    std::size_t best = 0;
    int best_score = -1;
    for (std::size_t i = 0; i < options.size(); ++i) {
      const int s = description_overlap(options[i], *obj);
      if (s > best_score) {
        best = i;
        best_score = s;
      }
    }
    return options[best];
  }

  std::string simple_query(PatchRef p, std::optional<std::string_view> question) {
    const auto* obj = dominant(p);
    if (!question) {
      if (obj) return obj->label;
      trace_.notes.push_back("simple_query: nothing recognizable in patch #" + std::to_string(p.id));
      return "nothing";
    }
    if (obj)
      if (auto a = scene_.qa_answer(obj->id, *question)) return *a;
    if (auto a = scene_.qa_answer("*", *question)) return *a;
    trace_.notes.push_back("simple_query: no fixture for '" + std::string(*question) + "'");
    return "no fixture";
  }

  std::string llm_query(std::string_view question) {
    if (auto a = scene_.qa_answer("*", question)) return *a;
    trace_.notes.push_back("llm_query: no fixture for '" + std::string(question) + "'");
    return "no fixture";
  }

  /// Median ground-truth depth over the pixels whose centers fall inside the patch.
  [[nodiscard]] double compute_depth(PatchRef p) const {
    const auto& rec = at(p);
    std::vector<double> depths;
    const int c0 = static_cast<int>(std::ceil(rec.bounds.left - 0.5));
    const int c1 = static_cast<int>(std::ceil(rec.bounds.right - 0.5));
    const int r0 = static_cast<int>(std::ceil(rec.bounds.lower - 0.5));
    const int r1 = static_cast<int>(std::ceil(rec.bounds.upper - 0.5));
    for (std::size_t vi : rec.views) {
      const auto& view = views_.views[vi];
      for (int y = std::max(r0, 0); y < std::min(r1, static_cast<int>(view.height)); ++y)
        for (int x = std::max(c0, 0); x < std::min(c1, static_cast<int>(view.width)); ++x)
          depths.push_back(views_.depth_at(view, x + 0.5, y + 0.5));
    }
    if (depths.empty()) return views_.source->frames[0].camera.max_range;
    const std::size_t mid = depths.size() / 2;
    std::nth_element(depths.begin(), depths.begin() + static_cast<std::ptrdiff_t>(mid), depths.end());
    const double upper = depths[mid];
    if (depths.size() % 2 == 1) return upper;
    const double lower = *std::max_element(depths.begin(), depths.begin() + static_cast<std::ptrdiff_t>(mid));
    return (lower + upper) / 2.0;
  }

  PatchRef crop(PatchRef p, const Box2& requested) {
    const auto rec = at(p);
    return make(rec.bounds.intersect(requested), rec.frame, rec.views, rec.id, "crop");
  }

  [[nodiscard]] bool overlaps_with(PatchRef p, const Box2& o) const {
    const auto& b = at(p).bounds;
    return b.left <= o.right && b.right >= o.left && b.lower <= o.upper && b.upper >= o.lower;
  }

  double distance(PatchRef a, PatchRef b) {
    const auto& ra = at(a);
    const auto& rb = at(b);
    if (views_.mode == projection::Representation::B && ra.frame != rb.frame)
      trace_.notes.push_back("distance across frames: #" + std::to_string(a.id) + " (" + ra.frame + ") vs #" +
                             std::to_string(b.id) + " (" + rb.frame + ")");
    return box_distance(ra.bounds, rb.bounds);
  }

  std::size_t best_image_match(const std::vector<PatchRef>& patches, const std::vector<std::string>& content) {
    if (patches.empty()) throw ExecError("best_image_match: empty patch list");
    std::string phrase;
    for (const auto& c : content) phrase += c + " ";
    std::size_t best = 0;
    int best_score = -1;
    for (std::size_t i = 0; i < patches.size(); ++i) {
      const auto* obj = dominant(patches[i]);
      const int s = obj ? description_overlap(phrase, *obj) : 0;
      if (s > best_score) {
        best = i;
        best_score = s;
      }
    }
    return best;
  }

 private:
  const world::SceneSpec& scene_;
  const projection::AssembledViews& views_;
  ExecutionTrace& trace_;
};

}  // namespace navcon::runtime
