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

// Scene representation shared by every other module: triangle-mesh surfaces,
// tessellation into area patches, nearest-hit ray casting and sphere queries.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ivsr {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a * s; }
  friend constexpr Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
  friend constexpr bool operator==(Vec3 a, Vec3 b) = default;

  Vec3& operator+=(Vec3 o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline double distance(Vec3 a, Vec3 b) { return norm(a - b); }
inline bool is_finite(Vec3 a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}
// Throws kInvalidArgument for a zero or non-finite vector.
Vec3 normalized(Vec3 a);

struct Aabb {
  Vec3 min;
  Vec3 max;

  bool contains(Vec3 p, double tol = 1e-9) const {
    return p.x >= min.x - tol && p.y >= min.y - tol && p.z >= min.z - tol &&
           p.x <= max.x + tol && p.y <= max.y + tol && p.z <= max.z + tol;
  }
  Vec3 extent() const { return max - min; }
  double diagonal() const { return norm(max - min); }
};

struct Triangle {
  Vec3 a;
  Vec3 b;
  Vec3 c;

  Vec3 normal() const { return cross(b - a, c - a); }  // unnormalized, |n| = 2·area
  double area() const { return 0.5 * norm(normal()); }
};

enum class SurfaceKind { kFloor, kWall, kCeiling, kObject };

// Structural surfaces are collidable unless the scene says otherwise; objects
// are not. An object can still be flagged as an occluder, which stops rays
// without adding to the detectable area.
struct Surface {
  std::string id;
  SurfaceKind kind = SurfaceKind::kFloor;
  std::vector<Triangle> triangles;
  std::string material_tag;
  bool collidable = true;
  bool occluder = false;

  double area() const;
  bool blocks_rays() const { return collidable || occluder; }
};

bool default_collidable(SurfaceKind kind);

// Validated, immutable after construction. Surfaces are stored sorted by id so
// that every traversal (tessellation, spread updates) has one fixed order.
class Scene {
 public:
  // Throws kInvalidScene on duplicate ids, degenerate triangles, non-finite
  // vertices, or vertices outside `bounds`.
  Scene(std::vector<Surface> surfaces, Aabb bounds);

  const std::vector<Surface>& surfaces() const { return surfaces_; }
  const Aabb& bounds() const { return bounds_; }
  const Surface* find(const std::string& id) const;
  bool has_collidable() const;

 private:
  std::vector<Surface> surfaces_;
  Aabb bounds_;
};

// Axis-aligned closed room [0,w]×[0,d]×[0,h], two triangles per face, normals
// facing inward. Used by the CLI demos, benchmarks and tests.
Scene make_room(double width, double depth, double height,
                const std::string& material_tag = "concrete",
                std::optional<std::string> floor_material = std::nullopt);

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length

  // Normalizes `direction`; throws kInvalidArgument on a zero vector.
  static Ray through(Vec3 origin, Vec3 direction);
  Vec3 at(double t) const { return origin + direction * t; }
};

using PatchId = std::uint32_t;

struct Patch {
  PatchId id = 0;
  std::string surface_id;
  std::uint32_t facet = 0;  // planar group within the surface
  std::pair<std::int32_t, std::int32_t> cell{0, 0};
  Vec3 centroid;
  double area = 0.0;
  std::string material_tag;
};

struct Hit {
  Vec3 point;
  std::string surface_id;
  std::optional<PatchId> patch_id;
  double distance = 0.0;
  std::uint32_t triangle = 0;  // index within the hit surface
};

// Möller–Trumbore. Returns the ray parameter of the intersection, if any.
std::optional<double> intersect(const Ray& ray, const Triangle& tri);

// Nearest hit over ray-blocking surfaces; ties go to the lowest surface id.
// patch_id is left empty, use TessellatedScene::ray_cast to resolve it.
std::optional<Hit> ray_cast(const Scene& scene, const Ray& ray);

double total_area(const Scene& scene);

// Throws kInvalidArgument for patch_size <= 0, kEmptyScene without a
// collidable surface.
std::vector<Patch> tessellate(const Scene& scene, double patch_size);

// Uniform hash grid over patch centroids.
class PatchIndex {
 public:
  PatchIndex() = default;
  PatchIndex(std::span<const Patch> patches, double cell_size);

  // Ids of patches whose centroid lies within `radius` of `center`, ascending.
  std::vector<PatchId> within_sphere(Vec3 center, double radius) const;

 private:
  struct Key {
    std::int64_t x, y, z;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };
  Key key_of(Vec3 p) const;

  std::vector<Vec3> centroids_;
  std::vector<PatchId> ids_;
  double cell_size_ = 1.0;
  std::unordered_map<Key, std::vector<PatchId>, KeyHash> buckets_;
};

std::vector<PatchId> patches_within_sphere(std::span<const Patch> patches, Vec3 center,
                                           double radius);

// A scene together with its patch table and the lookups needed to map a ray
// hit onto the patch that contains it.
class TessellatedScene {
 public:
  TessellatedScene(Scene scene, double patch_size);

  const Scene& scene() const { return scene_; }
  double patch_size() const { return patch_size_; }
  const std::vector<Patch>& patches() const { return patches_; }
  const Patch& patch(PatchId id) const { return patches_.at(id); }
  const PatchIndex& index() const { return index_; }
  double s0() const { return s0_; }

  std::optional<Hit> ray_cast(const Ray& ray) const;
  std::optional<PatchId> patch_at(const std::string& surface_id, std::uint32_t triangle,
                                  Vec3 point) const;
  // Facet (planar group) of a triangle of the given surface.
  std::optional<std::uint32_t> facet_of(const std::string& surface_id,
                                        std::uint32_t triangle) const;
  std::optional<PatchId> nearest_patch(Vec3 point) const;

 private:
  struct Frame {
    Vec3 origin;
    Vec3 u;
    Vec3 v;
  };
  struct SurfaceTable {
    std::vector<std::uint32_t> triangle_facet;
    std::vector<Frame> frames;
    std::vector<std::vector<PatchId>> facet_patches;
    // packed (facet, i, j) -> patch id
    std::unordered_map<std::uint64_t, PatchId> cells;
  };
  struct Built {
    std::vector<Patch> patches;
    std::unordered_map<std::string, SurfaceTable> tables;
  };
  static Built build(const Scene& scene, double patch_size);

  Scene scene_;
  double patch_size_;
  std::vector<Patch> patches_;
  PatchIndex index_;
  double s0_ = 0.0;
  std::unordered_map<std::string, SurfaceTable> tables_;

  friend std::vector<Patch> tessellate(const Scene&, double);
};

using SceneHandle = std::shared_ptr<const TessellatedScene>;

std::string to_string(SurfaceKind kind);
SurfaceKind surface_kind_from_string(const std::string& name);

}  // namespace ivsr
