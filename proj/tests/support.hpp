#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "navcon/world/scene.hpp"
#include "navcon/world/world.hpp"

namespace navcon::testing {

using world::Box3;
using world::SceneObject;
using world::SceneSpec;
using world::Vec3;

inline std::filesystem::path data_dir() { return NAVCON_DATA_DIR; }

inline SceneSpec empty_scene(Vec3 extent = {10, 10, 3}, double res = 0.1,
                             world::Terrain::Kind terrain = world::Terrain::Kind::Flat) {
  SceneSpec s;
  s.name = "test";
  s.extent = extent;
  s.resolution = res;
  s.terrain.kind = terrain;
  s.terrain.flat_height = res;
  s.robot_start = {1.0, extent.y / 2, 0.0};
  return s;
}

inline SceneObject object(std::string id, std::string label, Box3 box,
                          std::vector<std::string> attributes = {},
                          std::vector<std::string> synonyms = {}) {
  SceneObject o;
  o.id = std::move(id);
  o.label = std::move(label);
  o.box = box;
  o.attributes = std::move(attributes);
  o.synonyms = std::move(synonyms);
  return o;
}

/// Box standing on the floor (top of the flat terrain at z = floor).
inline Box3 standing(double cx, double cy, double sx, double sy, double sz, double floor = 0.1) {
  return {{cx - sx / 2, cy - sy / 2, floor}, {cx + sx / 2, cy + sy / 2, floor + sz}};
}

inline world::World make_world(SceneSpec s) {
  world::validate_scene(s);
  return world::World::from_scene(std::move(s));
}

}  // namespace navcon::testing
