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

#include "ivsr/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <set>

#include "ivsr/error.hpp"

namespace ivsr {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidScene: return "InvalidScene";
    case ErrorCode::kEmptyScene: return "EmptyScene";
    case ErrorCode::kPixelOutOfRange: return "PixelOutOfRange";
    case ErrorCode::kLocalizationMiss: return "LocalizationMiss";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kStorageError: return "StorageError";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kUnknownMaterial: return "UnknownMaterial";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
    case ErrorCode::kUnknownPatch: return "UnknownPatch";
    case ErrorCode::kBadWeights: return "BadWeights";
    case ErrorCode::kEmptySeries: return "EmptySeries";
    case ErrorCode::kEmptyLibrary: return "EmptyLibrary";
    case ErrorCode::kEmptyGrid: return "EmptyGrid";
    case ErrorCode::kNoMatches: return "NoMatches";
    case ErrorCode::kUnknownScenario: return "UnknownScenario";
    case ErrorCode::kIllegalTransition: return "IllegalTransition";
    case ErrorCode::kMissingModifiedPlan: return "MissingModifiedPlan";
    case ErrorCode::kRouteBlocked: return "RouteBlocked";
  }
  return "Unknown";
}

Vec3 normalized(Vec3 a) {
  const double n = norm(a);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::kInvalidArgument, "cannot normalize a zero or non-finite vector");
  }
  return a / n;
}

double Surface::area() const {
  double sum = 0.0;
  for (const auto& t : triangles) sum += t.area();
  return sum;
}

bool default_collidable(SurfaceKind kind) { return kind != SurfaceKind::kObject; }

std::string to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::kFloor: return "floor";
    case SurfaceKind::kWall: return "wall";
    case SurfaceKind::kCeiling: return "ceiling";
    case SurfaceKind::kObject: return "object";
  }
  return "object";
}

SurfaceKind surface_kind_from_string(const std::string& name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "floor") return SurfaceKind::kFloor;
  if (lower == "wall") return SurfaceKind::kWall;
  if (lower == "ceiling") return SurfaceKind::kCeiling;
  if (lower == "object") return SurfaceKind::kObject;
  throw Error(ErrorCode::kInvalidScene, "unknown surface kind '" + name + "'");
}

Scene::Scene(std::vector<Surface> surfaces, Aabb bounds)
    : surfaces_(std::move(surfaces)), bounds_(bounds) {
  if (!is_finite(bounds_.min) || !is_finite(bounds_.max) || bounds_.min.x > bounds_.max.x ||
      bounds_.min.y > bounds_.max.y || bounds_.min.z > bounds_.max.z) {
    throw Error(ErrorCode::kInvalidScene, "bounds are not a valid box");
  }
  std::sort(surfaces_.begin(), surfaces_.end(),
            [](const Surface& a, const Surface& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < surfaces_.size(); ++i) {
    const Surface& s = surfaces_[i];
    if (s.id.empty()) throw Error(ErrorCode::kInvalidScene, "surface with empty id");
    if (i > 0 && surfaces_[i - 1].id == s.id) {
      throw Error(ErrorCode::kInvalidScene, "duplicate surface id '" + s.id + "'");
    }
    if (s.triangles.empty()) {
      throw Error(ErrorCode::kInvalidScene, "surface '" + s.id + "' has no triangles");
    }
    for (const auto& t : s.triangles) {
      for (Vec3 v : {t.a, t.b, t.c}) {
        if (!is_finite(v)) {
          throw Error(ErrorCode::kInvalidScene, "non-finite vertex in '" + s.id + "'");
        }
        if (!bounds_.contains(v)) {
          throw Error(ErrorCode::kInvalidScene, "vertex of '" + s.id + "' outside bounds");
        }
      }
      if (!(t.area() > 1e-12)) {
        throw Error(ErrorCode::kInvalidScene, "degenerate triangle in '" + s.id + "'");
      }
    }
  }
}

const Surface* Scene::find(const std::string& id) const {
  auto it = std::lower_bound(surfaces_.begin(), surfaces_.end(), id,
                             [](const Surface& s, const std::string& key) { return s.id < key; });
  if (it == surfaces_.end() || it->id != id) return nullptr;
  return &*it;
}

bool Scene::has_collidable() const {
  return std::any_of(surfaces_.begin(), surfaces_.end(),
                     [](const Surface& s) { return s.collidable; });
}

Scene make_room(double width, double depth, double height, const std::string& material_tag,
                std::optional<std::string> floor_material) {
  const double w = width, d = depth, h = height;
  auto quad = [](Vec3 a, Vec3 b, Vec3 c, Vec3 e) {
    return std::vector<Triangle>{{a, b, c}, {a, c, e}};
  };
  std::vector<Surface> s;
  s.push_back({"floor", SurfaceKind::kFloor,
               quad({0, 0, 0}, {w, 0, 0}, {w, d, 0}, {0, d, 0}),
               floor_material.value_or(material_tag), true, false});
  s.push_back({"ceiling", SurfaceKind::kCeiling,
               quad({0, 0, h}, {0, d, h}, {w, d, h}, {w, 0, h}), material_tag, true, false});
  s.push_back({"wall-s", SurfaceKind::kWall,
               quad({0, 0, 0}, {0, 0, h}, {w, 0, h}, {w, 0, 0}), material_tag, true, false});
  s.push_back({"wall-n", SurfaceKind::kWall,
               quad({0, d, 0}, {w, d, 0}, {w, d, h}, {0, d, h}), material_tag, true, false});
  s.push_back({"wall-w", SurfaceKind::kWall,
               quad({0, 0, 0}, {0, d, 0}, {0, d, h}, {0, 0, h}), material_tag, true, false});
  s.push_back({"wall-e", SurfaceKind::kWall,
               quad({w, 0, 0}, {w, 0, h}, {w, d, h}, {w, d, 0}), material_tag, true, false});
  return Scene(std::move(s), Aabb{{0, 0, 0}, {w, d, h}});
}

Ray Ray::through(Vec3 origin, Vec3 direction) { return Ray{origin, normalized(direction)}; }

std::optional<double> intersect(const Ray& ray, const Triangle& tri) {
  constexpr double kParallel = 1e-14;
  constexpr double kEdge = 1e-12;
  const Vec3 e1 = tri.b - tri.a;
  const Vec3 e2 = tri.c - tri.a;
  const Vec3 p = cross(ray.direction, e2);
  const double det = dot(e1, p);
  if (std::abs(det) < kParallel) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = ray.origin - tri.a;
  const double u = dot(s, p) * inv;
  if (u < -kEdge || u > 1.0 + kEdge) return std::nullopt;
  const Vec3 q = cross(s, e1);
  const double v = dot(ray.direction, q) * inv;
  if (v < -kEdge || u + v > 1.0 + kEdge) return std::nullopt;
  const double t = dot(e2, q) * inv;
  if (t < 0.0) return std::nullopt;
  return t;
}

std::optional<Hit> ray_cast(const Scene& scene, const Ray& ray) {
  std::optional<Hit> best;
  double best_t = std::numeric_limits<double>::infinity();
  for (const Surface& s : scene.surfaces()) {
    if (!s.blocks_rays()) continue;
    for (std::uint32_t i = 0; i < s.triangles.size(); ++i) {
      auto t = intersect(ray, s.triangles[i]);
      // Strict comparison keeps the first surface (lowest id) on exact ties.
      if (t && *t < best_t) {
        best_t = *t;
        best = Hit{ray.at(*t), s.id, std::nullopt, *t, i};
      }
    }
  }
  return best;
}

double total_area(const Scene& scene) {
  if (!scene.has_collidable()) throw Error(ErrorCode::kEmptyScene, "no collidable surface");
  double sum = 0.0;
  for (const Surface& s : scene.surfaces()) {
    if (s.collidable) sum += s.area();
  }
  return sum;
}

namespace {

struct Point2 {
  double u, v;
};

using Polygon = std::vector<Point2>;

// Sutherland–Hodgman against one axis-aligned half-plane.
Polygon clip(const Polygon& poly, int axis, double bound, bool keep_greater) {
  Polygon out;
  if (poly.empty()) return out;
  auto coord = [axis](const Point2& p) { return axis == 0 ? p.u : p.v; };
  auto inside = [&](const Point2& p) {
    return keep_greater ? coord(p) >= bound : coord(p) <= bound;
  };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& cur = poly[i];
    const Point2& prev = poly[(i + poly.size() - 1) % poly.size()];
    const bool cin = inside(cur), pin = inside(prev);
    if (cin != pin) {
      const double t = (bound - coord(prev)) / (coord(cur) - coord(prev));
      Point2 x{prev.u + t * (cur.u - prev.u), prev.v + t * (cur.v - prev.v)};
      if (axis == 0) x.u = bound; else x.v = bound;
      out.push_back(x);
    }
    if (cin) out.push_back(cur);
  }
  return out;
}

// Signed area and area-weighted centroid (shoelace).
std::pair<double, Point2> area_centroid(const Polygon& poly) {
  double a2 = 0.0, cu = 0.0, cv = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % poly.size()];
    const double c = p.u * q.v - q.u * p.v;
    a2 += c;
    cu += (p.u + q.u) * c;
    cv += (p.v + q.v) * c;
  }
  if (a2 == 0.0) return {0.0, {0.0, 0.0}};
  return {0.5 * a2, {cu / (3.0 * a2), cv / (3.0 * a2)}};
}

std::uint64_t pack_cell(std::uint32_t facet, std::int32_t i, std::int32_t j) {
  return (static_cast<std::uint64_t>(facet) << 42) ^
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i) & 0x1FFFFFu) << 21) ^
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(j) & 0x1FFFFFu));
}

}  // namespace

TessellatedScene::Built TessellatedScene::build(const Scene& scene, double patch_size) {
  if (!(patch_size > 0.0) || !std::isfinite(patch_size)) {
    throw Error(ErrorCode::kInvalidArgument, "patch_size must be positive");
  }
  if (!scene.has_collidable()) throw Error(ErrorCode::kEmptyScene, "no collidable surface");

  Built built;
  for (const Surface& surface : scene.surfaces()) {
    if (!surface.collidable) continue;
    SurfaceTable& table = built.tables[surface.id];

    // Group triangles into planar facets, in first-seen order.
    struct Plane {
      Vec3 n;
      double offset;
    };
    std::vector<Plane> planes;
    const double scale = std::max(1.0, scene.bounds().diagonal());
    for (const Triangle& t : surface.triangles) {
      const Vec3 n = normalized(t.normal());
      const double off = dot(n, t.a);
      std::uint32_t facet = static_cast<std::uint32_t>(planes.size());
      for (std::uint32_t k = 0; k < planes.size(); ++k) {
        if (dot(planes[k].n, n) > 1.0 - 1e-9 && std::abs(planes[k].offset - off) < 1e-9 * scale) {
          facet = k;
          break;
        }
      }
      if (facet == planes.size()) planes.push_back({n, off});
      table.triangle_facet.push_back(facet);
    }

    for (std::uint32_t f = 0; f < planes.size(); ++f) {
      const Vec3 n = planes[f].n;
      Vec3 u;
      if (std::abs(n.z) > 0.9) {
        u = normalized(Vec3{1, 0, 0} - n * n.x);
      } else {
        u = normalized(cross(Vec3{0, 0, 1}, n));
      }
      const Vec3 v = cross(n, u);
      // Anchor the grid at the facet's minimum (u, v) corner.
      double umin = std::numeric_limits<double>::infinity();
      double vmin = umin;
      for (std::size_t k = 0; k < surface.triangles.size(); ++k) {
        if (table.triangle_facet[k] != f) continue;
        const Triangle& t = surface.triangles[k];
        for (Vec3 p : {t.a, t.b, t.c}) {
          umin = std::min(umin, dot(p, u));
          vmin = std::min(vmin, dot(p, v));
        }
      }
      const Vec3 origin = n * planes[f].offset + u * umin + v * vmin;
      table.frames.push_back({origin, u, v});
    }

    struct Accum {
      double area = 0.0;
      double wu = 0.0;
      double wv = 0.0;
    };
    std::vector<std::map<std::pair<std::int32_t, std::int32_t>, Accum>> cells(planes.size());
    for (std::size_t k = 0; k < surface.triangles.size(); ++k) {
      const std::uint32_t f = table.triangle_facet[k];
      const Frame& fr = table.frames[f];
      const Triangle& t = surface.triangles[k];
      Polygon tri;
      for (Vec3 p : {t.a, t.b, t.c}) tri.push_back({dot(p - fr.origin, fr.u), dot(p - fr.origin, fr.v)});
      if (area_centroid(tri).first < 0.0) std::reverse(tri.begin(), tri.end());
      double lo_u = tri[0].u, hi_u = tri[0].u, lo_v = tri[0].v, hi_v = tri[0].v;
      for (const auto& p : tri) {
        lo_u = std::min(lo_u, p.u);
        hi_u = std::max(hi_u, p.u);
        lo_v = std::min(lo_v, p.v);
        hi_v = std::max(hi_v, p.v);
      }
      const auto i0 = static_cast<std::int32_t>(std::floor(lo_u / patch_size));
      const auto i1 = static_cast<std::int32_t>(std::ceil(hi_u / patch_size));
      const auto j0 = static_cast<std::int32_t>(std::floor(lo_v / patch_size));
      const auto j1 = static_cast<std::int32_t>(std::ceil(hi_v / patch_size));
      for (std::int32_t i = i0; i < std::max(i1, i0 + 1); ++i) {
        Polygon strip = clip(clip(tri, 0, i * patch_size, true), 0, (i + 1) * patch_size, false);
        if (strip.size() < 3) continue;
        for (std::int32_t j = j0; j < std::max(j1, j0 + 1); ++j) {
          Polygon piece =
              clip(clip(strip, 1, j * patch_size, true), 1, (j + 1) * patch_size, false);
          if (piece.size() < 3) continue;
          auto [a, c] = area_centroid(piece);
          if (!(a > 0.0)) continue;
          Accum& acc = cells[f][{i, j}];
          acc.area += a;
          acc.wu += a * c.u;
          acc.wv += a * c.v;
        }
      }
    }

    table.facet_patches.resize(planes.size());
    for (std::uint32_t f = 0; f < planes.size(); ++f) {
      const Frame& fr = table.frames[f];
      for (const auto& [ij, acc] : cells[f]) {
        Patch p;
        p.id = static_cast<PatchId>(built.patches.size());
        p.surface_id = surface.id;
        p.facet = f;
        p.cell = ij;
        p.area = acc.area;
        p.centroid = fr.origin + fr.u * (acc.wu / acc.area) + fr.v * (acc.wv / acc.area);
        p.material_tag = surface.material_tag;
        table.cells.emplace(pack_cell(f, ij.first, ij.second), p.id);
        table.facet_patches[f].push_back(p.id);
        built.patches.push_back(std::move(p));
      }
    }
  }
  return built;
}

std::vector<Patch> tessellate(const Scene& scene, double patch_size) {
  return TessellatedScene::build(scene, patch_size).patches;
}

std::size_t PatchIndex::KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (std::int64_t c : {k.x, k.y, k.z}) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

PatchIndex::Key PatchIndex::key_of(Vec3 p) const {
  return {static_cast<std::int64_t>(std::floor(p.x / cell_size_)),
          static_cast<std::int64_t>(std::floor(p.y / cell_size_)),
          static_cast<std::int64_t>(std::floor(p.z / cell_size_))};
}

PatchIndex::PatchIndex(std::span<const Patch> patches, double cell_size)
    : cell_size_(cell_size > 0.0 ? cell_size : 1.0) {
  centroids_.reserve(patches.size());
  ids_.reserve(patches.size());
  for (std::size_t i = 0; i < patches.size(); ++i) {
    centroids_.push_back(patches[i].centroid);
    ids_.push_back(patches[i].id);
    buckets_[key_of(patches[i].centroid)].push_back(static_cast<PatchId>(i));
  }
}

std::vector<PatchId> PatchIndex::within_sphere(Vec3 center, double radius) const {
  std::vector<PatchId> out;
  if (radius < 0.0 || centroids_.empty()) return out;
  const double r2 = radius * radius;
  auto test = [&](PatchId slot) {
    const Vec3 d = centroids_[slot] - center;
    if (dot(d, d) <= r2) out.push_back(ids_[slot]);
  };
  const Key lo = key_of(center - Vec3{radius, radius, radius});
  const Key hi = key_of(center + Vec3{radius, radius, radius});
  const double span = static_cast<double>(hi.x - lo.x + 1) * static_cast<double>(hi.y - lo.y + 1) *
                      static_cast<double>(hi.z - lo.z + 1);
  if (span > static_cast<double>(buckets_.size())) {
    for (const auto& [key, ids] : buckets_) {
      for (PatchId id : ids) test(id);
    }
  } else {
    for (std::int64_t x = lo.x; x <= hi.x; ++x) {
      for (std::int64_t y = lo.y; y <= hi.y; ++y) {
        for (std::int64_t z = lo.z; z <= hi.z; ++z) {
          auto it = buckets_.find({x, y, z});
          if (it == buckets_.end()) continue;
          for (PatchId id : it->second) test(id);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PatchId> patches_within_sphere(std::span<const Patch> patches, Vec3 center,
                                           double radius) {
  double cell = radius > 0.0 ? radius : 1.0;
  return PatchIndex(patches, cell).within_sphere(center, radius);
}

TessellatedScene::TessellatedScene(Scene scene, double patch_size)
    : scene_(std::move(scene)), patch_size_(patch_size) {
  Built built = build(scene_, patch_size_);
  patches_ = std::move(built.patches);
  tables_ = std::move(built.tables);
  index_ = PatchIndex(patches_, std::max(patch_size_, 0.5));
  s0_ = total_area(scene_);
}

std::optional<std::uint32_t> TessellatedScene::facet_of(const std::string& surface_id,
                                                        std::uint32_t triangle) const {
  auto it = tables_.find(surface_id);
  if (it == tables_.end() || triangle >= it->second.triangle_facet.size()) return std::nullopt;
  return it->second.triangle_facet[triangle];
}

std::optional<PatchId> TessellatedScene::patch_at(const std::string& surface_id,
                                                  std::uint32_t triangle, Vec3 point) const {
  auto it = tables_.find(surface_id);
  if (it == tables_.end() || triangle >= it->second.triangle_facet.size()) return std::nullopt;
  const SurfaceTable& table = it->second;
  const std::uint32_t f = table.triangle_facet[triangle];
  const Frame& fr = table.frames[f];
  const double u = dot(point - fr.origin, fr.u);
  const double v = dot(point - fr.origin, fr.v);
  const auto i = static_cast<std::int32_t>(std::floor(u / patch_size_));
  const auto j = static_cast<std::int32_t>(std::floor(v / patch_size_));
  if (auto c = table.cells.find(pack_cell(f, i, j)); c != table.cells.end()) return c->second;
  // Points on a clipped boundary can round into an empty cell.
  std::optional<PatchId> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (PatchId id : table.facet_patches[f]) {
    const double d = distance(patches_[id].centroid, point);
    if (d < best_d) {
      best_d = d;
      best = id;
    }
  }
  return best;
}

std::optional<Hit> TessellatedScene::ray_cast(const Ray& ray) const {
  auto hit = ivsr::ray_cast(scene_, ray);
  if (hit) hit->patch_id = patch_at(hit->surface_id, hit->triangle, hit->point);
  return hit;
}

std::optional<PatchId> TessellatedScene::nearest_patch(Vec3 point) const {
  std::optional<PatchId> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const Patch& p : patches_) {
    const double d = distance(p.centroid, point);
    if (d < best_d) {
      best_d = d;
      best = p.id;
    }
  }
  return best;
}

}  // namespace ivsr
