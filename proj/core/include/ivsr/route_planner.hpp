// Copyright 2026 The IVSR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drone route planning: A* over a voxel grid with 26-connectivity.
//
// Edge costs are the Euclidean distance between voxel centers (1, √2 or √3
// voxels) and the heuristic is the straight-line distance to the goal, so
// returned paths are shortest. Among equal f-values the lexicographically
// smallest voxel index (i, j, k) is expanded first.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ivsr/geometry.hpp"
#include "ivsr/spread.hpp"

namespace ivsr {

inline constexpr double kDefaultVoxelSize = 0.5;
inline constexpr double kDefaultClearance = 0.5;

using VoxelIndex = std::array<int, 3>;

class VoxelGrid {
 public:
  VoxelGrid() = default;
  // All voxels free. The grid covers `bounds`, rounding the cell count up.
  VoxelGrid(Aabb bounds, double voxel);
  // Explicit dimensions with origin at bounds.min; blocked.size() == nx·ny·nz.
  VoxelGrid(Vec3 origin, double voxel, VoxelIndex dims, std::vector<std::uint8_t> blocked);

  const VoxelIndex& dims() const { return dims_; }
  double voxel() const { return voxel_; }
  Vec3 origin() const { return origin_; }
  std::size_t size() const { return blocked_.size(); }

  bool contains(const VoxelIndex& v) const;
  std::size_t linear(const VoxelIndex& v) const;
  VoxelIndex unlinear(std::size_t i) const;
  Vec3 center(const VoxelIndex& v) const;
  Aabb box(const VoxelIndex& v) const;
  // Voxel containing p, absent outside the grid.
  std::optional<VoxelIndex> voxel_of(Vec3 p) const;

  bool blocked(const VoxelIndex& v) const { return blocked_[linear(v)] != 0; }
  void set_blocked(const VoxelIndex& v, bool b) { blocked_[linear(v)] = b ? 1 : 0; }

 private:
  Vec3 origin_;
  double voxel_ = kDefaultVoxelSize;
  VoxelIndex dims_{0, 0, 0};
  std::vector<std::uint8_t> blocked_;
};

// Separating-axis test between a triangle and a box.
bool triangle_intersects_box(const Triangle& tri, const Aabb& box);

// Blocks voxels overlapping any surface and voxels whose center lies within
// a flame source's reach plus `clearance`.
VoxelGrid build_voxel_grid(const Scene& scene, const SpreadState* spread, double clearance,
                           double voxel = kDefaultVoxelSize);

struct GridPath {
  std::vector<VoxelIndex> voxels;
  double cost = 0.0;  // metres
};

// Shortest path between two free voxels, absent when none exists.
std::optional<GridPath> astar(const VoxelGrid& grid, const VoxelIndex& start, const VoxelIndex& goal);

struct RoutePlan {
  std::vector<Vec3> waypoints;  // voxel centers, start to goal
  double total_length = 0.0;
  double clearance = 0.0;
};

// Throws kOutOfBounds for endpoints outside the scene, kRouteBlocked when an
// endpoint is blocked or no path exists.
RoutePlan plan_drone_route(const Scene& scene, const SpreadState* spread, Vec3 start, Vec3 goal,
                           double clearance = kDefaultClearance, double voxel = kDefaultVoxelSize);

// Same, but ends at the free voxel reachable from `start` that lies closest
// to `target`. Used when the target itself sits inside blocked space.
RoutePlan plan_standoff_route(const Scene& scene, const SpreadState* spread, Vec3 start,
                              Vec3 target, double clearance = kDefaultClearance,
                              double voxel = kDefaultVoxelSize);

}  // namespace ivsr
