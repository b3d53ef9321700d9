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

// Shared fixtures and independent reference implementations for tests.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "ivsr/camera.hpp"
#include "ivsr/geometry.hpp"
#include "ivsr/route_planner.hpp"
#include "ivsr/scenario_library.hpp"

namespace ivsr::testing {

inline const std::filesystem::path kDataDir = IVSR_DATA_DIR;

// Sensor log lines from the field deployment.
inline const std::string kSingleEntry =
    R"({"FireThreatLevel": "probable fire", "StartDateTime": "2024-03-17 07:05:36.137095", )"
    R"("CPUTemperature": 50.1, "SensorId": "", "Column": "107", "Row": "67", )"
    R"("Temperature": "107", "Number": "400"})";

inline const std::array<std::string, 6> kDailyEntries = {
    R"({"FireThreatLevel": "fire hazard", "StartDateTime": "2024-02-26 10:25:54.334260", "CPUTemperature": 49.1, "SensorId": "", "Column": "76", "Row": "39", "Temperature": "71", "Number": "1007"})",
    R"({"FireThreatLevel": "probable fire", "StartDateTime": "2024-02-27 21:40:09.074818", "CPUTemperature": 56.0, "SensorId": "", "Column": "83", "Row": "50", "Temperature": "72", "Number": "1073"})",
    R"({"FireThreatLevel": "probable fire", "StartDateTime": "2024-03-04 04:46:13.202399", "CPUTemperature": 50.1, "SensorId": "", "Column": "79", "Row": "79", "Temperature": "69", "Number": "315"})",
    R"({"FireThreatLevel": "probable fire", "StartDateTime": "2024-03-10 04:17:32.398583", "CPUTemperature": 49.1, "SensorId": "", "Column": "83", "Row": "73", "Temperature": "78", "Number": "412"})",
    R"({"FireThreatLevel": "probable fire", "StartDateTime": "2024-03-17 05:52:32.027040", "CPUTemperature": 47.2, "SensorId": "", "Column": "97", "Row": "58", "Temperature": "148", "Number": "626"})",
    R"({"FireThreatLevel": "probable fire", "StartDateTime": "2024-03-17 06:44:15.698722", "CPUTemperature": 47.7, "SensorId": "", "Column": "80", "Row": "66", "Temperature": "66", "Number": "417"})",
};

// The last daily entry exactly as printed, with a doubled closing brace.
inline const std::string kDailyEntryAsPrinted = kDailyEntries[5] + "}";

struct RandomRoom {
  double width = 0.0;
  double depth = 0.0;
  double height = 0.0;
  CameraPose camera;
};

// Room and a ceiling-mounted camera looking down into it.
inline RandomRoom random_room(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomRoom r;
  r.width = 4.0 + 8.0 * u(rng);
  r.depth = 4.0 + 8.0 * u(rng);
  r.height = 2.5 + 2.0 * u(rng);
  r.camera.id = "cam";
  r.camera.position = {0.3 + u(rng) * (r.width - 0.6), 0.3 + u(rng) * (r.depth - 0.6),
                       r.height - 0.2};
  r.camera.yaw = u(rng) * 360.0;
  r.camera.pitch = -(20.0 + u(rng) * 60.0);
  r.camera.h_fov = 50.0 + u(rng) * 60.0;
  r.camera.v_fov = 40.0 + u(rng) * 50.0;
  return r;
}

// Ray/triangle test by plane intersection and same-side edge checks.
inline std::optional<double> plane_hit(const Ray& ray, const Triangle& tri) {
  const Vec3 n = tri.normal();
  const double denom = dot(n, ray.direction);
  if (std::abs(denom) < 1e-12) return std::nullopt;
  const double t = dot(n, tri.a - ray.origin) / denom;
  if (t <= 1e-9) return std::nullopt;
  const Vec3 p = ray.at(t);
  const double tol = -1e-9 * dot(n, n);
  if (dot(cross(tri.b - tri.a, p - tri.a), n) < tol) return std::nullopt;
  if (dot(cross(tri.c - tri.b, p - tri.b), n) < tol) return std::nullopt;
  if (dot(cross(tri.a - tri.c, p - tri.c), n) < tol) return std::nullopt;
  return t;
}

struct BruteHit {
  double t = std::numeric_limits<double>::infinity();
  std::string surface_id;
};

inline std::optional<BruteHit> brute_ray_cast(const Scene& scene, const Ray& ray) {
  std::optional<BruteHit> best;
  for (const Surface& s : scene.surfaces()) {
    if (!s.blocks_rays()) continue;
    for (const Triangle& tri : s.triangles) {
      if (auto t = plane_hit(ray, tri); t && (!best || *t < best->t - 1e-9)) {
        best = BruteHit{*t, s.id};
      }
    }
  }
  return best;
}

// Plain Dijkstra over the 26-neighbourhood.
inline std::optional<double> dijkstra(const VoxelGrid& grid, const VoxelIndex& start,
                                      const VoxelIndex& goal) {
  if (grid.blocked(start) || grid.blocked(goal)) return std::nullopt;
  std::vector<double> dist(grid.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[grid.linear(start)] = 0.0;
  open.push({0.0, grid.linear(start)});
  const std::size_t target = grid.linear(goal);
  while (!open.empty()) {
    auto [d, u] = open.top();
    open.pop();
    if (d > dist[u]) continue;
    if (u == target) return d;
    const VoxelIndex v = grid.unlinear(u);
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          if (dx == 0 && dy == 0 && dz == 0) continue;
          const VoxelIndex w{v[0] + dx, v[1] + dy, v[2] + dz};
          if (!grid.contains(w) || grid.blocked(w)) continue;
          const double nd =
              d + grid.voxel() * std::sqrt(static_cast<double>(dx * dx + dy * dy + dz * dz));
          const std::size_t wi = grid.linear(w);
          if (nd < dist[wi]) {
            dist[wi] = nd;
            open.push({nd, wi});
          }
        }
  }
  return std::nullopt;
}

// Minimum-cost warping path over all paths, normalized by the length of the
// shortest one among them, by explicit recursion over every path.
inline void enumerate_paths(const std::vector<double>& a, const std::vector<double>& b,
                            std::size_t i, std::size_t j, double cost, std::size_t len,
                            double& best_cost, std::size_t& best_len) {
  cost += std::abs(a[i] - b[j]);
  ++len;
  if (i + 1 == a.size() && j + 1 == b.size()) {
    if (cost < best_cost - 1e-12 || (std::abs(cost - best_cost) <= 1e-12 && len < best_len)) {
      best_cost = cost;
      best_len = len;
    }
    return;
  }
  if (i + 1 < a.size()) enumerate_paths(a, b, i + 1, j, cost, len, best_cost, best_len);
  if (j + 1 < b.size()) enumerate_paths(a, b, i, j + 1, cost, len, best_cost, best_len);
  if (i + 1 < a.size() && j + 1 < b.size())
    enumerate_paths(a, b, i + 1, j + 1, cost, len, best_cost, best_len);
}

inline double brute_dtw(const std::vector<double>& a, const std::vector<double>& b) {
  double best_cost = std::numeric_limits<double>::infinity();
  std::size_t best_len = 0;
  enumerate_paths(a, b, 0, 0, 0.0, 0, best_cost, best_len);
  return best_cost / static_cast<double>(best_len);
}

inline FeatureVector random_features(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> count(0, 40);
  FeatureVector f;
  f.severity = static_cast<Severity>(count(rng) % 3);
  f.responders = count(rng);
  f.fire_trucks = count(rng) / 4;
  f.helicopters = count(rng) / 10;
  f.ambulances = count(rng) / 10;
  f.material_class = static_cast<MaterialClass>(count(rng) % 3);
  f.wind_speed = 60 * u(rng);
  f.wind_direction = 359.9 * u(rng);
  f.spread_rate = 3 * u(rng);
  f.max_temp = 20 + 400 * u(rng);
  for (PathObject o : {PathObject::kTrees, PathObject::kPowerLines, PathObject::kStructures})
    if (u(rng) < 0.5) f.objects_in_path.insert(o);
  return f;
}

inline std::vector<double> random_growth(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 2);
  std::uniform_int_distribution<int> len(1, 12);
  std::vector<double> g(static_cast<std::size_t>(len(rng)));
  double acc = 0;
  for (double& x : g) x = acc += u(rng);
  return g;
}

}  // namespace ivsr::testing
