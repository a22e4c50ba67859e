#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "navcon/runtime/patch.hpp"

namespace navcon::runtime {

inline constexpr std::string_view kNavFunction = "navigate_to_object";

struct NavResult {
  std::string function = "None";
  std::optional<std::pair<double, double>> inputs;
  std::optional<Box2> box;
  std::optional<std::string> error;
  std::optional<std::string> frame;
  bool normalized = false;  // built from something other than a well-formed result mapping

  [[nodiscard]] bool ok() const { return function != "None"; }

  static NavResult failure(std::string message) {
    NavResult r;
    r.error = std::move(message);
    return r;
  }

  bool operator==(const NavResult& o) const {
    auto same_box = [](const std::optional<Box2>& a, const std::optional<Box2>& b) {
      if (a.has_value() != b.has_value()) return false;
      return !a || (a->left == b->left && a->lower == b->lower && a->right == b->right && a->upper == b->upper);
    };
    return function == o.function && inputs == o.inputs && same_box(box, o.box) && error == o.error &&
           frame == o.frame && normalized == o.normalized;
  }
};

inline nlohmann::json to_json(const NavResult& r) {
  nlohmann::json j;
  j["function"] = r.function;
  if (r.inputs) j["inputs"] = {r.inputs->first, r.inputs->second};
  if (r.box) j["box"] = {r.box->left, r.box->lower, r.box->right, r.box->upper};
  if (r.error) j["error"] = *r.error;
  if (r.frame) j["frame"] = *r.frame;
  if (r.normalized) j["normalized"] = true;
  return j;
}

namespace detail {

inline std::optional<std::vector<double>> numbers(const Value& v, std::size_t n) {
  if (!v.is_sequence() || v.items().size() != n) return std::nullopt;
  std::vector<double> out;
  for (const auto& x : v.items()) {
    if (!x.is_number()) return std::nullopt;
    out.push_back(as_double(x));
  }
  return out;
}

inline bool same_box(const Box2& a, const Box2& b) {
  return a.left == b.left && a.lower == b.lower && a.right == b.right && a.upper == b.upper;
}

// Registered frame for an exact-bounds match; front wins over left, left over right.
inline std::optional<std::string> frame_for_box(const Box2& box, const ExecutionTrace& trace,
                                                projection::Representation mode) {
  if (mode == projection::Representation::A) return std::string("panorama");
  static constexpr std::array<std::string_view, 3> precedence{"front", "left", "right"};
  std::optional<std::size_t> best;
  for (const auto& rec : trace.patch_registry) {
    if (!same_box(rec.bounds, box)) continue;
    for (std::size_t i = 0; i < precedence.size(); ++i)
      if (rec.frame == precedence[i] && (!best || i < *best)) best = i;
  }
  if (!best) return std::nullopt;
  return std::string(precedence[*best]);
}

// Box of a registered detection patch whose center is exactly (x, y).
inline std::optional<Box2> box_for_center(double x, double y, const ExecutionTrace& trace) {
  for (auto it = trace.patch_registry.rbegin(); it != trace.patch_registry.rend(); ++it)
    if (it->origin == "find" && it->bounds.horizontal_center() == x && it->bounds.vertical_center() == y)
      return it->bounds;
  return std::nullopt;
}

}  // namespace detail

/// Normalizes a program's return value into the navigation result contract.
inline NavResult resolve_nav_result(const Value& raw, ExecutionTrace& trace, projection::Representation mode) {
  NavResult r;
  if (raw.is_patch()) {
    const auto& rec = trace.patch_registry.at(static_cast<std::size_t>(raw.patch().id));
    r.function = std::string(kNavFunction);
    r.inputs = {rec.bounds.horizontal_center(), rec.bounds.vertical_center()};
    r.box = rec.bounds;
    r.normalized = true;
    trace.notes.push_back("normalized: bare patch #" + std::to_string(rec.id) + " returned");
  } else if (raw.is_dict()) {
    const Value* fn = raw.get("function");
    if (!fn) return NavResult::failure("malformed result");
    if (fn->is_none() || (fn->is_str() && fn->str() == "None")) {
      const Value* err = raw.get("error");
      return NavResult::failure(err ? display(*err) : "malformed result");
    }
    if (!fn->is_str()) return NavResult::failure("malformed result");
    if (fn->str() != kNavFunction && fn->str() != "nav_function")
      return NavResult::failure("unknown nav function: " + fn->str());
    r.function = std::string(kNavFunction);
    if (fn->str() != kNavFunction) {
      r.normalized = true;
      trace.notes.push_back("normalized: function '" + fn->str() + "' read as navigate_to_object");
    }
    const Value* inputs = raw.get("inputs");
    const Value* box = raw.get("box");
    if (box) {
      auto b = detail::numbers(*box, 4);
      if (!b) return NavResult::failure("malformed result");
      r.box = Box2{(*b)[0], (*b)[1], (*b)[2], (*b)[3]};
    }
    if (inputs) {
      auto xy = detail::numbers(*inputs, 2);
      if (!xy) return NavResult::failure("malformed result");
      r.inputs = {(*xy)[0], (*xy)[1]};
    }
    if (!r.inputs && !r.box) return NavResult::failure("malformed result");
    if (!r.inputs) {
      r.inputs = {r.box->horizontal_center(), r.box->vertical_center()};
      r.normalized = true;
      trace.notes.push_back("normalized: inputs taken from box center");
    }
    if (!r.box) {
      r.box = detail::box_for_center(r.inputs->first, r.inputs->second, trace);
      if (!r.box) return NavResult::failure("malformed result");
      r.normalized = true;
      trace.notes.push_back("normalized: box taken from the detection centered at inputs");
    }
    if (!r.box->contains(r.inputs->first, r.inputs->second)) return NavResult::failure("inputs outside box");
  } else {
    return NavResult::failure("malformed result");
  }
  r.frame = detail::frame_for_box(*r.box, trace, mode);
  return r;
}

}  // namespace navcon::runtime
