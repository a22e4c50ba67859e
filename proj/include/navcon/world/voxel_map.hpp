#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "navcon/error.hpp"
#include "navcon/world/geometry.hpp"
#include "navcon/world/scene.hpp"

namespace navcon::world {

struct VoxelIndex {
  int x = 0;
  int y = 0;
  int z = 0;

  int& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
  int operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  friend bool operator==(const VoxelIndex&, const VoxelIndex&) = default;
};

/// Dense occupancy grid anchored at the world origin.
class VoxelMap {
 public:
  enum class Provenance { SceneDerived, Explicit };

  VoxelMap() = default;
  VoxelMap(double resolution, std::array<int, 3> dims, Provenance provenance = Provenance::Explicit)
      : resolution_(resolution), dims_(dims), provenance_(provenance) {
    if (!(resolution > 0.0) || dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0)
      throw GeometryError("voxel map needs positive resolution and dims");
    bits_.assign((cell_count() + 63) / 64, 0);
  }

  [[nodiscard]] double resolution() const { return resolution_; }
  [[nodiscard]] const std::array<int, 3>& dims() const { return dims_; }
  [[nodiscard]] Provenance provenance() const { return provenance_; }
  [[nodiscard]] std::size_t cell_count() const {
    return static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  }
  [[nodiscard]] Vec3 extent() const {
    return {dims_[0] * resolution_, dims_[1] * resolution_, dims_[2] * resolution_};
  }

  [[nodiscard]] bool inside(VoxelIndex v) const {
    return v.x >= 0 && v.y >= 0 && v.z >= 0 && v.x < dims_[0] && v.y < dims_[1] && v.z < dims_[2];
  }
  [[nodiscard]] bool inside(Vec3 p) const {
    const Vec3 e = extent();
    return p.x >= 0 && p.y >= 0 && p.z >= 0 && p.x <= e.x && p.y <= e.y && p.z <= e.z;
  }

  [[nodiscard]] std::size_t linear(VoxelIndex v) const {
    return (static_cast<std::size_t>(v.z) * dims_[1] + v.y) * dims_[0] + v.x;
  }

  [[nodiscard]] bool occupied(VoxelIndex v) const {
    if (!inside(v)) return false;
    const auto i = linear(v);
    return (bits_[i >> 6] >> (i & 63)) & 1ULL;
  }
  [[nodiscard]] bool occupied(int x, int y, int z) const { return occupied({x, y, z}); }

  void set(VoxelIndex v, bool value = true) {
    if (!inside(v)) throw GeometryError("voxel index outside map");
    const auto i = linear(v);
    if (value) bits_[i >> 6] |= (1ULL << (i & 63));
    else bits_[i >> 6] &= ~(1ULL << (i & 63));
  }

  [[nodiscard]] std::size_t occupied_count() const {
    std::size_t n = 0;
    for (auto w : bits_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  [[nodiscard]] Box3 voxel_box(VoxelIndex v) const {
    return {{v.x * resolution_, v.y * resolution_, v.z * resolution_},
            {(v.x + 1) * resolution_, (v.y + 1) * resolution_, (v.z + 1) * resolution_}};
  }

  /// Voxel containing p; points on the upper faces map to the last cell.
  [[nodiscard]] VoxelIndex index_of(Vec3 p) const {
    VoxelIndex v;
    for (int a = 0; a < 3; ++a)
      v[a] = std::clamp(static_cast<int>(std::floor(p[a] / resolution_)), 0, dims_[a] - 1);
    return v;
  }

  /// Marks every voxel that overlaps `box` with positive volume.
  void fill_box(const Box3& box) {
    constexpr double eps = 1e-9;
    std::array<int, 3> lo{}, hi{};
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::max(0, static_cast<int>(std::floor((box.min[a] + eps) / resolution_)));
      hi[a] = std::min(dims_[a] - 1, static_cast<int>(std::ceil((box.max[a] - eps) / resolution_)) - 1);
    }
    for (int z = lo[2]; z <= hi[2]; ++z)
      for (int y = lo[1]; y <= hi[1]; ++y)
        for (int x = lo[0]; x <= hi[0]; ++x) set({x, y, z});
  }

  /// Run-length encoding of the bitset in linear order, starting with a run of free cells.
  [[nodiscard]] std::vector<std::size_t> run_lengths() const {
    std::vector<std::size_t> runs;
    bool state = false;
    std::size_t run = 0;
    const std::size_t n = cell_count();
    for (std::size_t i = 0; i < n; ++i) {
      const bool b = (bits_[i >> 6] >> (i & 63)) & 1ULL;
      if (b != state) {
        runs.push_back(run);
        run = 0;
        state = b;
      }
      ++run;
    }
    runs.push_back(run);
    return runs;
  }

  friend bool operator==(const VoxelMap& a, const VoxelMap& b) {
    return a.resolution_ == b.resolution_ && a.dims_ == b.dims_ && a.bits_ == b.bits_;
  }

 private:
  double resolution_ = 1.0;
  std::array<int, 3> dims_{0, 0, 0};
  Provenance provenance_ = Provenance::Explicit;
  std::vector<std::uint64_t> bits_;
};

/// Occupancy from terrain solids and object boxes.
inline VoxelMap build_voxel_map(const SceneSpec& scene) {
  const double r = scene.resolution;
  VoxelMap map(r,
               {static_cast<int>(std::lround(scene.extent.x / r)),
                static_cast<int>(std::lround(scene.extent.y / r)),
                static_cast<int>(std::lround(scene.extent.z / r))},
               VoxelMap::Provenance::SceneDerived);
  for (const auto& solid : scene.terrain.solids(scene.extent)) map.fill_box(solid);
  for (const auto& obj : scene.objects) map.fill_box(obj.box);
  return map;
}

}  // namespace navcon::world
