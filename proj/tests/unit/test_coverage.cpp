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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "ivsr/coverage.hpp"
#include "ivsr/error.hpp"
#include "test_support.hpp"

namespace ivsr {
namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;

Scene floor_only(double w, double d) {
  return Scene({{"floor",
                 SurfaceKind::kFloor,
                 {{{0, 0, 0}, {w, 0, 0}, {w, d, 0}}, {{0, 0, 0}, {w, d, 0}, {0, d, 0}}},
                 "concrete",
                 true,
                 false}},
               Aabb{{0, 0, 0}, {w, d, 5}});
}

CameraPose down_at(Vec3 p, double h_fov = 90.0, double v_fov = 60.0) {
  CameraPose c;
  c.id = "down";
  c.position = p;
  c.pitch = -90.0;
  c.h_fov = h_fov;
  c.v_fov = v_fov;
  return c;
}

TEST(RayGrid, Counts) {
  CameraPose c;
  EXPECT_EQ(ray_grid(c, 10).size(), 100u);
  EXPECT_EQ(ray_grid(c, 1).size(), 1u);
  EXPECT_THROW(ray_grid(c, 0), Error);
}

TEST(RayGrid, SingleRayIsOpticalAxis) {
  CameraPose c;
  c.yaw = 30;
  c.pitch = -20;
  const Ray r = ray_grid(c, 1).front();
  const Vec3 f = camera_basis(c).forward;
  EXPECT_NEAR(distance(r.direction, f), 0.0, 1e-12);
}

TEST(RayGrid, QuadrantDirectionsFromHalfAngles) {
  CameraPose c;
  c.h_fov = 90;
  c.v_fov = 90;
  const auto rays = ray_grid(c, 2);
  // Identity orientation: forward +x, right -y, up +z. Cell centers sit at
  // screen ±0.5, i.e. tan(45°)·0.5 off the axis.
  const double t = std::tan(45.0 * kDeg) * 0.5;
  const Vec3 expected[4] = {{1, t, t}, {1, -t, t}, {1, t, -t}, {1, -t, -t}};
  for (int i = 0; i < 4; ++i) {
    const Vec3 e = expected[i] / norm(expected[i]);
    EXPECT_NEAR(distance(rays[i].direction, e), 0.0, 1e-12) << i;
  }
}

TEST(Coverage, CameraAimedOutside) {
  const TessellatedScene ts(floor_only(10, 10), 0.25);
  CameraPose up = down_at({5, 5, 1});
  up.pitch = 90;
  const auto r = compute_coverage(ts, up, 10);
  EXPECT_EQ(r.s1, 0.0);
  EXPECT_EQ(r.p1, 0.0);
  EXPECT_NEAR(r.s0, 100.0, 1e-9);
}

TEST(Coverage, DownwardFootprintMatchesDenseOracle) {
  const TessellatedScene ts(floor_only(20, 20), 0.25);
  const CameraPose c = down_at({10, 10, 3});
  const double dense = compute_coverage(ts, c, 200).s1;
  const double analytic = (2 * 3 * std::tan(45 * kDeg)) * (2 * 3 * std::tan(30 * kDeg));
  EXPECT_NEAR(dense, analytic, 0.05 * analytic);
  EXPECT_NEAR(compute_coverage(ts, c, 10).s1, dense, 0.05 * dense);
}

// Recount for an axis-aligned room whose sides are multiples of the patch
// size, so every patch is a full square and the patch holding a point is the
// one with the nearest centroid on that surface.
double recount_p1(const TessellatedScene& ts, const CameraPose& cam, int n) {
  const auto& patches = ts.patches();
  std::vector<std::string> cell_surface(static_cast<std::size_t>(n) * n);
  std::set<PatchId> covered;
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const ScreenPoint sp{(2.0 * col + 1.0) / n - 1.0, 1.0 - (2.0 * row + 1.0) / n};
      const Ray ray = screen_ray(cam, sp);
      auto hit = testing::brute_ray_cast(ts.scene(), ray);
      if (!hit) continue;
      cell_surface[static_cast<std::size_t>(row) * n + col] = hit->surface_id;
      const Vec3 p = ray.at(hit->t);
      PatchId best = 0;
      double best_d = 1e300;
      for (const Patch& q : patches) {
        if (q.surface_id != hit->surface_id) continue;
        const double d = distance(q.centroid, p);
        if (d < best_d) {
          best_d = d;
          best = q.id;
        }
      }
      covered.insert(best);
    }
  }
  for (const Patch& q : patches) {
    auto sp = project(cam, q.centroid);
    if (!sp || std::abs(sp->sx) > 1 || std::abs(sp->sy) > 1) continue;
    const int col = std::min(n - 1, static_cast<int>((sp->sx + 1) * 0.5 * n));
    const int row = std::min(n - 1, static_cast<int>((1 - sp->sy) * 0.5 * n));
    const int dc[5] = {0, -1, 1, 0, 0};
    const int dr[5] = {0, 0, 0, -1, 1};
    for (int k = 0; k < 5; ++k) {
      const int cc = col + dc[k], rr = row + dr[k];
      if (cc < 0 || rr < 0 || cc >= n || rr >= n) continue;
      if (cell_surface[static_cast<std::size_t>(rr) * n + cc] == q.surface_id) covered.insert(q.id);
    }
  }
  double s1 = 0.0;
  for (PatchId id : covered) s1 += ts.patch(id).area;
  return s1 / ts.s0();
}

TEST(Coverage, EnclosingRoomMatchesRecount) {
  const TessellatedScene ts(make_room(6, 4, 3), 0.5);
  CameraPose c;
  c.position = {3, 2, 1.5};
  for (double yaw : {0.0, 37.0, 90.0, 200.0}) {
    c.yaw = yaw;
    c.pitch = -15;
    EXPECT_NEAR(compute_coverage(ts, c, 10).p1, recount_p1(ts, c, 10), 1e-12) << yaw;
  }
}

TEST(Coverage, HitPointsReported) {
  const TessellatedScene ts(make_room(6, 4, 3), 0.5);
  CameraPose c;
  c.position = {3, 2, 1.5};
  EXPECT_EQ(compute_coverage(ts, c, 10).hit_points.size(), 100u);
}

TEST(Union, OneCameraHasNoOverlap) {
  const TessellatedScene ts(make_room(6, 4, 3), 0.5);
  CameraPose c;
  c.position = {3, 2, 1.5};
  const auto u = union_coverage(ts, std::span(&c, 1), 10);
  EXPECT_EQ(u.overlap_area, 0.0);
  EXPECT_DOUBLE_EQ(u.s1, compute_coverage(ts, c, 10).s1);
}

TEST(Union, IdenticalCameras) {
  const TessellatedScene ts(make_room(6, 4, 3), 0.5);
  CameraPose c;
  c.position = {3, 2, 1.5};
  const std::vector<CameraPose> two{c, c};
  const auto u = union_coverage(ts, two, 10);
  const double single = compute_coverage(ts, c, 10).s1;
  EXPECT_DOUBLE_EQ(u.s1, single);
  EXPECT_DOUBLE_EQ(u.overlap_area, single);
}

TEST(Union, DisjointCamerasAdd) {
  const TessellatedScene ts(floor_only(20, 10), 0.25);
  const std::vector<CameraPose> two{down_at({4, 5, 2}), down_at({16, 5, 2})};
  const auto u = union_coverage(ts, two, 10);
  const double a = compute_coverage(ts, two[0], 10).s1;
  const double b = compute_coverage(ts, two[1], 10).s1;
  EXPECT_GT(a, 0.0);
  EXPECT_NEAR(u.s1, a + b, 1e-9);
  EXPECT_EQ(u.overlap_area, 0.0);
  EXPECT_THROW(union_coverage(ts, std::span<const CameraPose>{}, 10), Error);
}

TEST(Greedy, KZeroAndSingleCandidate) {
  const TessellatedScene ts(floor_only(10, 10), 0.25);
  const std::vector<CameraPose> one{down_at({5, 5, 2})};
  const auto none = greedy_placement(ts, one, 0);
  EXPECT_TRUE(none.chosen.empty());
  EXPECT_EQ(none.union_s1, 0.0);
  const auto pick = greedy_placement(ts, one, 1);
  ASSERT_EQ(pick.chosen_indices, std::vector<std::size_t>{0});
  EXPECT_DOUBLE_EQ(pick.union_s1, compute_coverage(ts, one[0], 10).s1);
}

TEST(Greedy, MinGainStopsEarly) {
  const TessellatedScene ts(floor_only(10, 10), 0.25);
  const std::vector<CameraPose> cams{down_at({5, 5, 2}), down_at({5, 5, 2})};
  const auto r = greedy_placement(ts, cams, 2, 0.01);
  EXPECT_EQ(r.chosen.size(), 1u);
}

TEST(Greedy, PairBoundAgainstExhaustiveSearch) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const TessellatedScene ts(make_room(8, 6, 3), 0.5);
  std::vector<CameraPose> cands;
  for (int i = 0; i < 6; ++i) {
    CameraPose c;
    c.id = "c" + std::to_string(i);
    c.position = {0.5 + 7 * u(rng), 0.5 + 5 * u(rng), 2.7};
    c.yaw = 360 * u(rng);
    c.pitch = -(20 + 50 * u(rng));
    cands.push_back(c);
  }
  std::vector<std::set<PatchId>> sets;
  for (const auto& c : cands) {
    auto v = covered_patches(ts, c, 10);
    sets.emplace_back(v.begin(), v.end());
  }
  double opt = 0.0;
  for (std::size_t a = 0; a < cands.size(); ++a)
    for (std::size_t b = a + 1; b < cands.size(); ++b) {
      std::set<PatchId> un = sets[a];
      un.insert(sets[b].begin(), sets[b].end());
      double s = 0.0;
      for (PatchId id : un) s += ts.patch(id).area;
      opt = std::max(opt, s);
    }
  const auto g = greedy_placement(ts, cands, 2);
  EXPECT_GE(g.union_s1, (1.0 - 1.0 / std::exp(1.0)) * opt);
  ASSERT_EQ(g.marginal_gains.size(), 2u);
  EXPECT_GE(g.marginal_gains[0], g.marginal_gains[1]);
}

}  // namespace
}  // namespace ivsr
