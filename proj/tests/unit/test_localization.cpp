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

#include "ivsr/error.hpp"
#include "ivsr/incident_log.hpp"
#include "ivsr/localization.hpp"
#include "test_support.hpp"

namespace ivsr {
namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;

CameraPose ceiling_camera() {
  CameraPose c;
  c.id = "cam-0";
  c.sensor_id = "ceiling-cam";
  c.position = {5, 4, 2.9};
  c.pitch = -90;
  c.h_fov = 90;
  c.v_fov = 60;
  c.pixel_cols = 160;
  c.pixel_rows = 120;
  return c;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(PixelToRay, CenterOfOddGridIsAxis) {
  CameraPose c = ceiling_camera();
  c.pixel_cols = 11;
  c.pixel_rows = 7;
  c.yaw = 25;
  c.pitch = -40;
  const Ray r = pixel_to_ray(c, 5, 3);
  EXPECT_NEAR(distance(r.direction, camera_basis(c).forward), 0.0, 1e-12);
}

TEST(PixelToRay, ClosedFormFrustumMapping) {
  const CameraPose c = ceiling_camera();
  const Ray r = pixel_to_ray(c, 107, 67);
  const double sx = (2 * 107 + 1) / 160.0 - 1;
  const double sy = 1 - (2 * 67 + 1) / 120.0;
  // Looking straight down with yaw 0: image right is world -y, image up is +x.
  Vec3 d{sy * std::tan(30 * kDeg), -sx * std::tan(45 * kDeg), -1};
  d = d / norm(d);
  EXPECT_NEAR(distance(r.direction, d), 0.0, 1e-12);
}

TEST(PixelToRay, OutOfRange) {
  const CameraPose c = ceiling_camera();
  EXPECT_EQ(code_of([&] { pixel_to_ray(c, 160, 0); }), ErrorCode::kPixelOutOfRange);
  EXPECT_EQ(code_of([&] { pixel_to_ray(c, 0, -1); }), ErrorCode::kPixelOutOfRange);
}

TEST(Localize, CenterPixelLandsBelowAxis) {
  CameraPose c = ceiling_camera();
  c.pixel_cols = 161;
  c.pixel_rows = 121;
  DetectionRecord rec;
  rec.column = 80;
  rec.row = 60;
  const FireEvent e = localize(make_room(10, 8, 3), c, rec);
  EXPECT_EQ(e.surface_id, "floor");
  EXPECT_NEAR(e.position.x, 5, 1e-12);
  EXPECT_NEAR(e.position.y, 4, 1e-12);
  EXPECT_NEAR(e.position.z, 0, 1e-12);
}

TEST(Localize, SingleEntryRecord) {
  const DetectionRecord rec = parse_detection(testing::kSingleEntry);
  const FireEvent e = localize(make_room(10, 8, 3), ceiling_camera(), rec, 7);
  EXPECT_EQ(e.id, 7u);
  EXPECT_DOUBLE_EQ(e.peak_temp, 107.0);
  EXPECT_EQ(e.pixel_count, 400);
  EXPECT_EQ(e.threat_level, "probable fire");
  EXPECT_EQ(e.sensor_id, "ceiling-cam");
  const double sx = (2 * 107 + 1) / 160.0 - 1;
  const double sy = 1 - (2 * 67 + 1) / 120.0;
  EXPECT_NEAR(e.position.x, 5 + 2.9 * sy * std::tan(30 * kDeg), 1e-9);
  EXPECT_NEAR(e.position.y, 4 - 2.9 * sx, 1e-9);
  EXPECT_NEAR(e.position.z, 0, 1e-12);
  EXPECT_EQ(e.position, localize(make_room(10, 8, 3), ceiling_camera(), rec, 7).position);
}

TEST(Localize, OpenSkyMisses) {
  CameraPose c = ceiling_camera();
  c.pitch = 90;
  const Scene floor({{"floor",
                      SurfaceKind::kFloor,
                      {{{0, 0, 0}, {10, 0, 0}, {10, 8, 0}}, {{0, 0, 0}, {10, 8, 0}, {0, 8, 0}}},
                      "concrete",
                      true,
                      false}},
                    Aabb{{0, 0, 0}, {10, 8, 3}});
  DetectionRecord rec;
  EXPECT_EQ(code_of([&] { localize(floor, c, rec); }), ErrorCode::kLocalizationMiss);
}

TEST(Localize, ReprojectionRecoversPixel) {
  std::mt19937_64 rng(17);
  const Scene room = make_room(10, 8, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_real_distribution<double> u(0, 1);
    CameraPose c = ceiling_camera();
    c.position = {1 + 8 * u(rng), 1 + 6 * u(rng), 1 + 1.8 * u(rng)};
    c.yaw = 360 * u(rng);
    c.pitch = -10 - 80 * u(rng);
    c.roll = 20 * (u(rng) - 0.5);
    std::uniform_int_distribution<int> col(0, c.pixel_cols - 1), row(0, c.pixel_rows - 1);
    for (int i = 0; i < 50; ++i) {
      DetectionRecord rec;
      rec.column = col(rng);
      rec.row = row(rng);
      const FireEvent e = localize(room, c, rec);
      auto px = project_to_pixel(c, e.position);
      ASSERT_TRUE(px);
      EXPECT_NEAR(px->first, rec.column + 0.5, 1e-6);
      EXPECT_NEAR(px->second, rec.row + 0.5, 1e-6);
    }
  }
}

TEST(Registry, DefaultSensorAndLookup) {
  SensorRegistry reg;
  EXPECT_TRUE(reg.empty());
  reg.bind(ceiling_camera());
  EXPECT_EQ(reg.default_sensor(), "ceiling-cam");
  EXPECT_NE(reg.camera_for(""), nullptr);
  EXPECT_EQ(reg.camera_for("other"), nullptr);
  CameraPose anon = ceiling_camera();
  anon.sensor_id.clear();
  EXPECT_THROW(reg.bind(anon), Error);
}

FireEvent event_at(Vec3 p, double seconds, std::int64_t pixels, double temp = 50) {
  FireEvent e;
  e.position = p;
  e.timestamp = Timestamp::from_seconds(seconds);
  e.pixel_count = pixels;
  e.peak_temp = temp;
  return e;
}

TEST(Merge, CloseEventsCollapse) {
  const auto out = merge_events({event_at({0, 0, 0}, 0, 10), event_at({0.3, 0, 0}, 2, 20)}, 0.5, 10);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NEAR(out[0].position.x, 0.15, 1e-12);
  EXPECT_EQ(out[0].pixel_count, 30);
}

TEST(Merge, FarInTimeStaySeparate) {
  EXPECT_EQ(merge_events({event_at({0, 0, 0}, 0, 1), event_at({0.3, 0, 0}, 20, 1)}, 0.5, 10).size(),
            2u);
}

TEST(Merge, RadiusZeroIsIdentity) {
  const std::vector<FireEvent> in{event_at({0, 0, 0}, 0, 1), event_at({0, 0, 0}, 0, 2)};
  const auto out = merge_events(in, 0.0, 10);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[1].pixel_count, 2);
}

TEST(Merge, TransitiveChain) {
  const auto out = merge_events({event_at({0, 0, 0}, 0, 1), event_at({0.4, 0, 0}, 1, 2),
                                 event_at({0.8, 0, 0}, 2, 4, 90)},
                                0.5, 10);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].pixel_count, 7);
  EXPECT_NEAR(out[0].position.x, 0.4, 1e-12);
  EXPECT_DOUBLE_EQ(out[0].peak_temp, 90);
}

}  // namespace
}  // namespace ivsr
