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

#include "ivsr/coverage.hpp"

#include <algorithm>
#include <optional>

#include "ivsr/error.hpp"

namespace ivsr {
namespace {

ScreenPoint cell_center(int col, int row, int n) {
  return {(2.0 * col + 1.0) / n - 1.0, 1.0 - (2.0 * row + 1.0) / n};
}

struct CellHit {
  const std::string* surface = nullptr;
  std::uint32_t facet = 0;
};

double area_of(const TessellatedScene& scene, std::span<const PatchId> ids) {
  double sum = 0.0;
  for (PatchId id : ids) sum += scene.patch(id).area;
  return sum;
}

}  // namespace

std::vector<Ray> ray_grid(const CameraPose& camera, int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "ray grid needs n >= 1");
  camera.validate();
  std::vector<Ray> rays;
  rays.reserve(static_cast<std::size_t>(n) * n);
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) rays.push_back(screen_ray(camera, cell_center(col, row, n)));
  }
  return rays;
}

std::vector<PatchId> covered_patches(const TessellatedScene& scene, const CameraPose& camera,
                                     int n, std::vector<Hit>* hits) {
  const std::vector<Ray> rays = ray_grid(camera, n);
  std::vector<CellHit> cells(rays.size());
  std::vector<char> covered(scene.patches().size(), 0);
  for (std::size_t k = 0; k < rays.size(); ++k) {
    auto hit = scene.ray_cast(rays[k]);
    if (!hit || !hit->patch_id) continue;
    covered[*hit->patch_id] = 1;
    const Patch& p = scene.patch(*hit->patch_id);
    cells[k] = {&p.surface_id, p.facet};
    if (hits) hits->push_back(*hit);
  }

  for (const Patch& p : scene.patches()) {
    if (covered[p.id]) continue;
    auto sp = project(camera, p.centroid);
    if (!sp || !in_frustum(*sp)) continue;
    const int col = std::clamp(static_cast<int>(std::floor((sp->sx + 1.0) * 0.5 * n)), 0, n - 1);
    const int row = std::clamp(static_cast<int>(std::floor((1.0 - sp->sy) * 0.5 * n)), 0, n - 1);
    auto on_facet = [&](int cc, int rr) {
      if (cc < 0 || rr < 0 || cc >= n || rr >= n) return false;
      const CellHit& c = cells[static_cast<std::size_t>(rr) * n + cc];
      return c.surface && *c.surface == p.surface_id && c.facet == p.facet;
    };
    if (on_facet(col, row)) {
      covered[p.id] = 1;
      continue;
    }
    // A cell whose sample landed elsewhere straddles a facet edge: credit the
    // patch when an edge-adjacent sample saw its facet.
    if (on_facet(col - 1, row) || on_facet(col + 1, row) || on_facet(col, row - 1) ||
        on_facet(col, row + 1)) {
      covered[p.id] = 1;
    }
  }

  std::vector<PatchId> out;
  for (PatchId id = 0; id < covered.size(); ++id) {
    if (covered[id]) out.push_back(id);
  }
  return out;
}

CoverageReport compute_coverage(const TessellatedScene& scene, const CameraPose& camera, int n) {
  CoverageReport r;
  r.s0 = scene.s0();
  r.covered_patch_ids = covered_patches(scene, camera, n, &r.hit_points);
  r.s1 = std::min(area_of(scene, r.covered_patch_ids), r.s0);
  r.p1 = r.s0 > 0.0 ? r.s1 / r.s0 : 0.0;
  return r;
}

CoverageReport compute_coverage(const Scene& scene, const CameraPose& camera, double patch_size,
                                int n) {
  return compute_coverage(TessellatedScene(scene, patch_size), camera, n);
}

CoverageReport union_coverage(const TessellatedScene& scene, std::span<const CameraPose> cameras,
                              int n) {
  if (cameras.empty()) throw Error(ErrorCode::kInvalidArgument, "union needs at least one camera");
  std::vector<int> times(scene.patches().size(), 0);
  CoverageReport r;
  r.s0 = scene.s0();
  for (const CameraPose& cam : cameras) {
    for (PatchId id : covered_patches(scene, cam, n, &r.hit_points)) ++times[id];
  }
  for (PatchId id = 0; id < times.size(); ++id) {
    if (times[id] >= 1) r.covered_patch_ids.push_back(id);
    if (times[id] >= 2) r.overlap_area += scene.patch(id).area;
  }
  r.s1 = std::min(area_of(scene, r.covered_patch_ids), r.s0);
  r.p1 = r.s0 > 0.0 ? r.s1 / r.s0 : 0.0;
  return r;
}

PlacementResult greedy_placement(const TessellatedScene& scene,
                                 std::span<const CameraPose> candidates, int k, double min_gain,
                                 int n) {
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "k must be non-negative");
  if (k > 0 && candidates.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no candidates to place");
  }
  PlacementResult result;
  if (k == 0) return result;

  std::vector<std::vector<PatchId>> sets;
  sets.reserve(candidates.size());
  for (const CameraPose& cam : candidates) sets.push_back(covered_patches(scene, cam, n));

  std::vector<int> times(scene.patches().size(), 0);
  std::vector<char> taken(candidates.size(), 0);
  while (static_cast<int>(result.chosen.size()) < k) {
    std::optional<std::size_t> best;
    double best_gain = -1.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (taken[c]) continue;
      double gain = 0.0;
      for (PatchId id : sets[c]) {
        if (times[id] == 0) gain += scene.patch(id).area;
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    if (!best || best_gain < min_gain) break;
    taken[*best] = 1;
    for (PatchId id : sets[*best]) ++times[id];
    result.chosen_indices.push_back(*best);
    result.chosen.push_back(candidates[*best]);
    result.marginal_gains.push_back(best_gain);
  }
  for (PatchId id = 0; id < times.size(); ++id) {
    if (times[id] >= 1) result.union_s1 += scene.patch(id).area;
    if (times[id] >= 2) result.overlap_area += scene.patch(id).area;
  }
  return result;
}

}  // namespace ivsr
