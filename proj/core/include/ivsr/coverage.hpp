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

// Ray-grid coverage estimation for virtual cameras.
//
// A camera shoots n×n rays through the cell centers of its view plane. The
// detectable area S0 is the collidable surface area of the scene; the
// covered area S1 is the area of patches credited to the camera, and
// P1 = S1 / S0.
//
// A patch is credited when a ray hits it, or when its centroid projects into
// a view cell whose ray landed on the same planar facet of the same surface.
// Each ray thus stands for the footprint of its view cell. For cells that
// straddle a facet edge, the edge-adjacent cells' rays are consulted too.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ivsr/camera.hpp"
#include "ivsr/geometry.hpp"

namespace ivsr {

inline constexpr double kDefaultPatchSize = 0.25;
inline constexpr int kDefaultRaysN = 10;

struct CoverageReport {
  double s0 = 0.0;
  double s1 = 0.0;
  double p1 = 0.0;
  std::vector<Hit> hit_points;
  std::vector<PatchId> covered_patch_ids;  // ascending
  double overlap_area = 0.0;               // only set by union_coverage
};

struct PlacementResult {
  std::vector<std::size_t> chosen_indices;  // into the candidate list
  std::vector<CameraPose> chosen;
  std::vector<double> marginal_gains;
  double union_s1 = 0.0;
  double overlap_area = 0.0;
};

// n² rays, row-major from the top-left view cell. Throws kInvalidArgument
// for n < 1.
std::vector<Ray> ray_grid(const CameraPose& camera, int n);

// Covered patch set of one camera (ascending ids). Appends ray hits on
// collidable patches to `hits` when given.
std::vector<PatchId> covered_patches(const TessellatedScene& scene, const CameraPose& camera,
                                     int n, std::vector<Hit>* hits = nullptr);

CoverageReport compute_coverage(const TessellatedScene& scene, const CameraPose& camera,
                                int n = kDefaultRaysN);
CoverageReport compute_coverage(const Scene& scene, const CameraPose& camera,
                                double patch_size = kDefaultPatchSize, int n = kDefaultRaysN);

// Union over cameras; overlap_area is the area of patches covered by two or
// more cameras. Throws kInvalidArgument when `cameras` is empty.
CoverageReport union_coverage(const TessellatedScene& scene, std::span<const CameraPose> cameras,
                              int n = kDefaultRaysN);

// Greedy max-coverage over a finite candidate set. Each round picks the
// candidate with the largest marginal covered area, earliest candidate on
// ties, and stops after k picks or once the best gain drops below min_gain.
PlacementResult greedy_placement(const TessellatedScene& scene,
                                 std::span<const CameraPose> candidates, int k,
                                 double min_gain = 0.0, int n = kDefaultRaysN);

}  // namespace ivsr
