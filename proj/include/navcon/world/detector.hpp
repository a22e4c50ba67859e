#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "navcon/text.hpp"
#include "navcon/world/render.hpp"
#include "navcon/world/scene.hpp"

namespace navcon::world {

struct Detection {
  std::string object_id;
  Box2 box;
  double score = 0.0;
};

/// Minimum overlap, in px^2, between a rectangle and the query region.
inline constexpr double kMinDetectionArea = 100.0;

namespace detail {

inline std::uint64_t noise_key(std::uint64_t seed, std::string_view object_id,
                               std::string_view query, std::string_view salt) {
  std::string q;
  for (const auto& t : text::tokens(query)) q += t + ' ';
  return text::fnv1a(salt, text::fnv1a(q, text::fnv1a(object_id, text::splitmix64(seed))));
}

}  // namespace detail

/// Phrases the detector associates with an object under the noise model.
inline std::vector<std::string> perceived_names(const SceneObject& obj, std::string_view query,
                                                const DetectorNoise& noise) {
  for (const auto& c : noise.confusions) {
    if (text::lower(c.label) != text::lower(obj.label)) continue;
    if (text::unit_from(detail::noise_key(noise.seed, obj.id, query, "confuse")) < c.prob)
      return {c.as};
  }
  std::vector<std::string> names{obj.label};
  names.insert(names.end(), obj.synonyms.begin(), obj.synonyms.end());
  return names;
}

/// True when the object's label or a synonym is contained token-wise in the query.
inline bool matches_query(const SceneObject& obj, std::string_view query, const DetectorNoise& noise) {
  const auto names = perceived_names(obj, query, noise);
  return std::any_of(names.begin(), names.end(),
                     [&](const std::string& n) { return text::phrase_in_query(n, query); });
}

/// Detections among already-projected rectangles, in one view's coordinates.
inline std::vector<Detection> detect_in_rects(const SceneSpec& scene,
                                              std::span<const ProjectedRect> rects,
                                              std::string_view query, const Box2& region,
                                              const DetectorNoise& noise) {
  std::vector<Detection> out;
  if (text::tokens(query).empty()) return out;
  for (const auto& r : rects) {
    const auto* obj = scene.find_object(r.object_id);
    if (obj == nullptr || !r.center_unoccluded) continue;
    if (r.box.intersection_area(region) < kMinDetectionArea) continue;
    if (!matches_query(*obj, query, noise)) continue;
    if (noise.miss_prob > 0.0 &&
        text::unit_from(detail::noise_key(noise.seed, obj->id, query, "miss")) < noise.miss_prob)
      continue;
    out.push_back({r.object_id, r.box.intersect(region), r.visible_fraction});
  }
  std::stable_sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.box.horizontal_center() != b.box.horizontal_center())
      return a.box.horizontal_center() < b.box.horizontal_center();
    return a.object_id < b.object_id;
  });
  return out;
}

/// Detector over one rendered camera frame.
inline std::vector<Detection> synthetic_detect(const SceneSpec& scene, const ViewSet& views,
                                               std::string_view query, std::string_view frame,
                                               const Box2& region, const DetectorNoise& noise) {
  const auto idx = views.frame_index(frame);
  if (!idx) return {};
  return detect_in_rects(scene, views.frames[*idx].rects, query, region, noise);
}

}  // namespace navcon::world
