#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "navcon/world/render.hpp"

namespace navcon::projection {

enum class Representation { A, B };

inline const char* to_string(Representation r) { return r == Representation::A ? "A" : "B"; }

inline Representation representation_from(std::string_view s) {
  if (s == "A" || s == "a") return Representation::A;
  if (s == "B" || s == "b") return Representation::B;
  throw Error("unknown representation: " + std::string(s));
}

/// Frames side by side, left to right, separated by blank pad columns.
struct PanoramaLayout {
  std::array<std::string, 3> order{"left", "front", "right"};
  double frame_width = 640.0;
  double frame_height = 480.0;
  double pad_px = 20.0;

  [[nodiscard]] double total_width() const { return 3 * frame_width + 2 * pad_px; }
  [[nodiscard]] double offset(std::size_t slot) const { return slot * (frame_width + pad_px); }

  [[nodiscard]] std::optional<std::size_t> slot_of(std::string_view frame) const {
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i] == frame) return i;
    return std::nullopt;
  }

  struct Local {
    std::size_t slot;
    double u;
  };

  /// Frame slot and frame-local column for a panorama column; empty on pad columns.
  [[nodiscard]] std::optional<Local> decompose(double x) const {
    for (std::size_t i = 0; i < order.size(); ++i) {
      const double o = offset(i);
      const bool last = i + 1 == order.size();
      if (x >= o && (x < o + frame_width || (last && x <= o + frame_width))) return Local{i, x - o};
    }
    return std::nullopt;
  }
};

/// A region of one source frame placed at a horizontal offset inside a root view.
struct Tile {
  std::size_t frame = 0;  // index into ViewSet::frames
  double x_offset = 0.0;
  double width = 0.0;
};

/// One image the program can look at: the panorama, or a single frame.
struct RootView {
  std::string frame;  // "panorama" or a camera frame name
  double width = 0.0;
  double height = 0.0;
  std::vector<world::ProjectedRect> rects;  // in this view's coordinates
  std::vector<Tile> tiles;

  [[nodiscard]] world::Box2 bounds() const { return {0.0, 0.0, width, height}; }
};

struct AssembledViews {
  Representation mode = Representation::A;
  std::vector<RootView> views;  // A: one panorama; B: left, front, right
  std::shared_ptr<const world::ViewSet> source;
  PanoramaLayout layout;

  [[nodiscard]] const RootView* view(std::string_view frame) const {
    for (const auto& v : views)
      if (v.frame == frame) return &v;
    return nullptr;
  }

  /// Depth at a view pixel; pad columns and out-of-view pixels read as max range.
  [[nodiscard]] double depth_at(const RootView& view, double x, double y) const {
    for (const auto& t : view.tiles)
      if (x >= t.x_offset && x < t.x_offset + t.width)
        return source->depth_at(t.frame, x - t.x_offset, y);
    return source->frames[0].camera.max_range;
  }
};

/// Builds the program-facing views for a representation.
inline AssembledViews assemble_representation(std::shared_ptr<const world::ViewSet> views,
                                              Representation mode, PanoramaLayout layout = {}) {
  AssembledViews out;
  out.mode = mode;
  out.layout = layout;
  if (mode == Representation::A) {
    RootView pano{"panorama", layout.total_width(), layout.frame_height, {}, {}};
    for (std::size_t slot = 0; slot < layout.order.size(); ++slot) {
      const auto idx = views->frame_index(layout.order[slot]);
      if (!idx) throw Error("missing frame " + layout.order[slot]);
      const double dx = layout.offset(slot);
      pano.tiles.push_back({*idx, dx, layout.frame_width});
      for (auto r : views->frames[*idx].rects) {
        r.box = r.box.translated(dx, 0.0);
        pano.rects.push_back(std::move(r));
      }
    }
    out.views.push_back(std::move(pano));
  } else {
    for (const auto& name : layout.order) {
      const auto idx = views->frame_index(name);
      if (!idx) throw Error("missing frame " + name);
      const auto& f = views->frames[*idx];
      out.views.push_back({name, static_cast<double>(f.camera.width),
                           static_cast<double>(f.camera.height), f.rects,
                           {{*idx, 0.0, static_cast<double>(f.camera.width)}}});
    }
  }
  out.source = std::move(views);
  return out;
}

}  // namespace navcon::projection
