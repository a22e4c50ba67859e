#pragma once

#include <filesystem>
#include <memory>

#include "navcon/world/scene.hpp"
#include "navcon/world/voxel_map.hpp"

namespace navcon::world {

/// Immutable scene plus its occupancy map, shareable across executions.
struct World {
  std::shared_ptr<const SceneSpec> scene;
  std::shared_ptr<const VoxelMap> map;

  static World from_scene(SceneSpec spec) {
    auto scene = std::make_shared<const SceneSpec>(std::move(spec));
    auto map = std::make_shared<const VoxelMap>(build_voxel_map(*scene));
    return {std::move(scene), std::move(map)};
  }

  static World load(const std::filesystem::path& path) { return from_scene(load_scene(path)); }
};

}  // namespace navcon::world
