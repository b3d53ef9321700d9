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

#include "ivsr/route_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "ivsr/error.hpp"

namespace ivsr {
namespace {

constexpr double kBoxShrink = 1e-6;

bool separated(const std::array<Vec3, 3>& v, Vec3 axis, Vec3 half) {
  const double p0 = dot(v[0], axis), p1 = dot(v[1], axis), p2 = dot(v[2], axis);
  const double r = half.x * std::fabs(axis.x) + half.y * std::fabs(axis.y) + half.z * std::fabs(axis.z);
  return std::min({p0, p1, p2}) > r || std::max({p0, p1, p2}) < -r;
}

int clamp_index(double x, int n) { return std::clamp(static_cast<int>(std::floor(x)), 0, n - 1); }

}  // namespace

VoxelGrid::VoxelGrid(Aabb bounds, double voxel) : origin_(bounds.min), voxel_(voxel) {
  if (!(voxel > 0.0) || !std::isfinite(voxel)) {
    throw Error(ErrorCode::kInvalidArgument, "voxel size must be positive");
  }
  const Vec3 e = bounds.extent();
  dims_ = {std::max(1, static_cast<int>(std::ceil(e.x / voxel - 1e-9))),
           std::max(1, static_cast<int>(std::ceil(e.y / voxel - 1e-9))),
           std::max(1, static_cast<int>(std::ceil(e.z / voxel - 1e-9)))};
  blocked_.assign(static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2], 0);
}

VoxelGrid::VoxelGrid(Vec3 origin, double voxel, VoxelIndex dims, std::vector<std::uint8_t> blocked)
    : origin_(origin), voxel_(voxel), dims_(dims), blocked_(std::move(blocked)) {
  if (!(voxel > 0.0) || dims[0] < 1 || dims[1] < 1 || dims[2] < 1 ||
      blocked_.size() != static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]) {
    throw Error(ErrorCode::kInvalidArgument, "inconsistent voxel grid");
  }
}

bool VoxelGrid::contains(const VoxelIndex& v) const {
  return v[0] >= 0 && v[1] >= 0 && v[2] >= 0 && v[0] < dims_[0] && v[1] < dims_[1] &&
         v[2] < dims_[2];
}

std::size_t VoxelGrid::linear(const VoxelIndex& v) const {
  return (static_cast<std::size_t>(v[0]) * dims_[1] + v[1]) * dims_[2] + v[2];
}

VoxelIndex VoxelGrid::unlinear(std::size_t i) const {
  const int k = static_cast<int>(i % dims_[2]);
  i /= dims_[2];
  const int j = static_cast<int>(i % dims_[1]);
  return {static_cast<int>(i / dims_[1]), j, k};
}

Vec3 VoxelGrid::center(const VoxelIndex& v) const {
  return origin_ + Vec3{(v[0] + 0.5) * voxel_, (v[1] + 0.5) * voxel_, (v[2] + 0.5) * voxel_};
}

Aabb VoxelGrid::box(const VoxelIndex& v) const {
  const Vec3 lo = origin_ + Vec3{v[0] * voxel_, v[1] * voxel_, v[2] * voxel_};
  return {lo, lo + Vec3{voxel_, voxel_, voxel_}};
}

std::optional<VoxelIndex> VoxelGrid::voxel_of(Vec3 p) const {
  const Vec3 r = (p - origin_) / voxel_;
  const double eps = 1e-9;
  if (r.x < -eps || r.y < -eps || r.z < -eps || r.x > dims_[0] + eps || r.y > dims_[1] + eps ||
      r.z > dims_[2] + eps) {
    return std::nullopt;
  }
  return VoxelIndex{clamp_index(r.x, dims_[0]), clamp_index(r.y, dims_[1]),
                    clamp_index(r.z, dims_[2])};
}

bool triangle_intersects_box(const Triangle& tri, const Aabb& box) {
  const Vec3 c = (box.min + box.max) * 0.5;
  const Vec3 h = (box.max - box.min) * 0.5;
  const std::array<Vec3, 3> v = {tri.a - c, tri.b - c, tri.c - c};
  const std::array<Vec3, 3> e = {v[1] - v[0], v[2] - v[1], v[0] - v[2]};
  const std::array<Vec3, 3> axes = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  for (const Vec3& a : axes) {
    for (const Vec3& edge : e) {
      const Vec3 axis = cross(a, edge);
      if (dot(axis, axis) > 1e-24 && separated(v, axis, h)) return false;
    }
  }
  for (const Vec3& a : axes) {
    if (separated(v, a, h)) return false;
  }
  const Vec3 n = cross(e[0], e[1]);
  if (dot(n, n) > 1e-24) {
    const double d = dot(n, v[0]);
    const double r = h.x * std::fabs(n.x) + h.y * std::fabs(n.y) + h.z * std::fabs(n.z);
    if (std::fabs(d) > r) return false;
  }
  return true;
}

VoxelGrid build_voxel_grid(const Scene& scene, const SpreadState* spread, double clearance,
                           double voxel) {
  if (!(clearance >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "clearance must be >= 0");
  VoxelGrid grid(scene.bounds(), voxel);
  const VoxelIndex& d = grid.dims();

  auto range = [&](Vec3 lo, Vec3 hi, VoxelIndex& a, VoxelIndex& b) {
    const Vec3 rl = (lo - grid.origin()) / voxel, rh = (hi - grid.origin()) / voxel;
    a = {clamp_index(rl.x, d[0]), clamp_index(rl.y, d[1]), clamp_index(rl.z, d[2])};
    b = {clamp_index(rh.x, d[0]), clamp_index(rh.y, d[1]), clamp_index(rh.z, d[2])};
  };

  for (const Surface& s : scene.surfaces()) {
    for (const Triangle& t : s.triangles) {
      const Vec3 lo{std::min({t.a.x, t.b.x, t.c.x}), std::min({t.a.y, t.b.y, t.c.y}),
                    std::min({t.a.z, t.b.z, t.c.z})};
      const Vec3 hi{std::max({t.a.x, t.b.x, t.c.x}), std::max({t.a.y, t.b.y, t.c.y}),
                    std::max({t.a.z, t.b.z, t.c.z})};
      VoxelIndex a, b;
      range(lo, hi, a, b);
      for (int i = a[0]; i <= b[0]; ++i) {
        for (int j = a[1]; j <= b[1]; ++j) {
          for (int k = a[2]; k <= b[2]; ++k) {
            const VoxelIndex v{i, j, k};
            if (grid.blocked(v)) continue;
            Aabb box = grid.box(v);
            const Vec3 shrink{kBoxShrink, kBoxShrink, kBoxShrink};
            box.min = box.min + shrink;
            box.max = box.max - shrink;
            if (triangle_intersects_box(t, box)) grid.set_blocked(v, true);
          }
        }
      }
    }
  }

  if (spread) {
    for (const FlameSource& src : spread->sources()) {
      if (src.ignite_time > spread->sim_time()) continue;
      const double outer = src.max_reach() + clearance;
      const Vec3 r{outer, outer, outer};
      VoxelIndex a, b;
      range(src.center - r, src.center + r, a, b);
      for (int i = a[0]; i <= b[0]; ++i) {
        for (int j = a[1]; j <= b[1]; ++j) {
          for (int k = a[2]; k <= b[2]; ++k) {
            const VoxelIndex v{i, j, k};
            const Vec3 off = grid.center(v) - src.center;
            const double dist = norm(off);
            const double reach = dist > 0.0 ? src.reach(off / dist) : src.isotropic;
            if (dist <= reach + clearance) grid.set_blocked(v, true);
          }
        }
      }
    }
  }
  return grid;
}

std::optional<GridPath> astar(const VoxelGrid& grid, const VoxelIndex& start, const VoxelIndex& goal) {
  if (!grid.contains(start) || !grid.contains(goal) || grid.blocked(start) || grid.blocked(goal)) {
    return std::nullopt;
  }
  const double h = grid.voxel();
  auto heuristic = [&](const VoxelIndex& v) {
    const double dx = v[0] - goal[0], dy = v[1] - goal[1], dz = v[2] - goal[2];
    return h * std::sqrt(dx * dx + dy * dy + dz * dz);
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> g(grid.size(), inf);
  std::vector<std::size_t> parent(grid.size(), grid.size());
  std::vector<std::uint8_t> closed(grid.size(), 0);

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const std::size_t s = grid.linear(start), t = grid.linear(goal);
  g[s] = 0.0;
  open.emplace(heuristic(start), s);

  while (!open.empty()) {
    const auto [f, u] = open.top();
    open.pop();
    if (closed[u]) continue;
    closed[u] = 1;
    if (u == t) break;
    const VoxelIndex uv = grid.unlinear(u);
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        for (int dk = -1; dk <= 1; ++dk) {
          if (di == 0 && dj == 0 && dk == 0) continue;
          const VoxelIndex nv{uv[0] + di, uv[1] + dj, uv[2] + dk};
          if (!grid.contains(nv) || grid.blocked(nv)) continue;
          const std::size_t n = grid.linear(nv);
          if (closed[n]) continue;
          const double cost = g[u] + h * std::sqrt(static_cast<double>(di * di + dj * dj + dk * dk));
          if (cost < g[n]) {
            g[n] = cost;
            parent[n] = u;
            open.emplace(cost + heuristic(nv), n);
          }
        }
      }
    }
  }
  if (!closed[t]) return std::nullopt;

  GridPath path;
  path.cost = g[t];
  for (std::size_t v = t; v != grid.size(); v = parent[v]) path.voxels.push_back(grid.unlinear(v));
  std::reverse(path.voxels.begin(), path.voxels.end());
  return path;
}

namespace {

VoxelIndex endpoint(const VoxelGrid& grid, Vec3 p, const char* name) {
  auto v = grid.voxel_of(p);
  if (!v || !is_finite(p)) {
    throw Error(ErrorCode::kOutOfBounds, std::string(name) + " lies outside the scene bounds");
  }
  return *v;
}

RoutePlan to_route(const VoxelGrid& grid, const GridPath& path, double clearance) {
  RoutePlan plan;
  plan.clearance = clearance;
  plan.total_length = path.cost;
  for (const VoxelIndex& v : path.voxels) plan.waypoints.push_back(grid.center(v));
  return plan;
}

}  // namespace

RoutePlan plan_drone_route(const Scene& scene, const SpreadState* spread, Vec3 start, Vec3 goal,
                           double clearance, double voxel) {
  const VoxelGrid grid = build_voxel_grid(scene, spread, clearance, voxel);
  const VoxelIndex s = endpoint(grid, start, "route start");
  const VoxelIndex g = endpoint(grid, goal, "route goal");
  if (grid.blocked(s)) throw Error(ErrorCode::kRouteBlocked, "route start is blocked");
  if (grid.blocked(g)) throw Error(ErrorCode::kRouteBlocked, "route goal is blocked");
  auto path = astar(grid, s, g);
  if (!path) throw Error(ErrorCode::kRouteBlocked, "no route between start and goal");
  return to_route(grid, *path, clearance);
}

RoutePlan plan_standoff_route(const Scene& scene, const SpreadState* spread, Vec3 start,
                              Vec3 target, double clearance, double voxel) {
  const VoxelGrid grid = build_voxel_grid(scene, spread, clearance, voxel);
  const VoxelIndex s = endpoint(grid, start, "route start");
  endpoint(grid, target, "route target");
  if (grid.blocked(s)) throw Error(ErrorCode::kRouteBlocked, "route start is blocked");

  // Flood the free space reachable from the start, keep the voxel nearest the target.
  std::vector<std::uint8_t> seen(grid.size(), 0);
  std::queue<std::size_t> frontier;
  frontier.push(grid.linear(s));
  seen[grid.linear(s)] = 1;
  std::size_t best = grid.linear(s);
  double best_d = distance(grid.center(s), target);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    const VoxelIndex uv = grid.unlinear(u);
    const double d = distance(grid.center(uv), target);
    if (d < best_d || (d == best_d && u < best)) {
      best = u;
      best_d = d;
    }
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        for (int dk = -1; dk <= 1; ++dk) {
          const VoxelIndex nv{uv[0] + di, uv[1] + dj, uv[2] + dk};
          if (!grid.contains(nv) || grid.blocked(nv)) continue;
          const std::size_t n = grid.linear(nv);
          if (!seen[n]) {
            seen[n] = 1;
            frontier.push(n);
          }
        }
      }
    }
  }
  auto path = astar(grid, s, grid.unlinear(best));
  if (!path) throw Error(ErrorCode::kRouteBlocked, "no route toward the target");
  return to_route(grid, *path, clearance);
}

}  // namespace ivsr
