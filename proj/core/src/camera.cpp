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

#include "ivsr/camera.hpp"

#include <numbers>

#include "ivsr/error.hpp"

namespace ivsr {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Vec3 rotate_x(Vec3 p, double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {p.x, p.y * c - p.z * s, p.y * s + p.z * c};
}

Vec3 rotate_y(Vec3 p, double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {p.x * c + p.z * s, p.y, -p.x * s + p.z * c};
}

Vec3 rotate_z(Vec3 p, double a) {
  const double c = std::cos(a), s = std::sin(a);
  return {p.x * c - p.y * s, p.x * s + p.y * c, p.z};
}

Vec3 to_world(const CameraPose& cam, Vec3 body) {
  return rotate_z(rotate_y(rotate_x(body, cam.roll * kDeg), -cam.pitch * kDeg), cam.yaw * kDeg);
}

}  // namespace

void CameraPose::validate() const {
  auto fail = [this](const std::string& what) {
    throw Error(ErrorCode::kInvalidArgument, "camera '" + id + "': " + what);
  };
  if (!is_finite(position)) fail("non-finite position");
  if (!std::isfinite(yaw) || !std::isfinite(pitch) || !std::isfinite(roll)) fail("non-finite angle");
  if (!(h_fov > 0.0 && h_fov < 180.0)) fail("h_fov must lie in (0, 180)");
  if (!(v_fov > 0.0 && v_fov < 180.0)) fail("v_fov must lie in (0, 180)");
  if (pixel_cols < 1 || pixel_rows < 1) fail("pixel grid must be at least 1x1");
}

CameraBasis camera_basis(const CameraPose& camera) {
  return {to_world(camera, {1, 0, 0}), to_world(camera, {0, -1, 0}), to_world(camera, {0, 0, 1})};
}

Ray screen_ray(const CameraPose& camera, ScreenPoint p) {
  const CameraBasis b = camera_basis(camera);
  const double tx = std::tan(0.5 * camera.h_fov * kDeg);
  const double ty = std::tan(0.5 * camera.v_fov * kDeg);
  return Ray::through(camera.position, b.forward + b.right * (p.sx * tx) + b.up * (p.sy * ty));
}

std::optional<ScreenPoint> project(const CameraPose& camera, Vec3 world) {
  const CameraBasis b = camera_basis(camera);
  const Vec3 d = world - camera.position;
  const double depth = dot(d, b.forward);
  if (!(depth > 0.0)) return std::nullopt;
  const double tx = std::tan(0.5 * camera.h_fov * kDeg);
  const double ty = std::tan(0.5 * camera.v_fov * kDeg);
  return ScreenPoint{dot(d, b.right) / (depth * tx), dot(d, b.up) / (depth * ty)};
}

}  // namespace ivsr
