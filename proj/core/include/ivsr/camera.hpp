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

// Pinhole model for the virtual cameras that stand in for physical sensors.
//
// Orientation: body frame has forward = +X, left = +Y, up = +Z. The world
// rotation is R = Rz(yaw) · Ry(-pitch) · Rx(roll), angles in degrees, so
// yaw turns about world +Z, positive pitch raises the optical axis, and
// positive roll turns the image counter-clockwise seen from behind.
//
// Screen coordinates (sx, sy) span [-1, 1] across the field of view, sx to
// the right and sy up. Pixel (column, row) has its origin at the top-left
// corner of the image, zero-based, column along sx and row along -sy.

#pragma once

#include <optional>
#include <string>

#include "ivsr/geometry.hpp"

namespace ivsr {

struct CameraPose {
  std::string id;
  std::string sensor_id;
  Vec3 position;
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
  double h_fov = 90.0;
  double v_fov = 60.0;
  int pixel_cols = 160;
  int pixel_rows = 120;

  // Throws kInvalidArgument when a field violates its range.
  void validate() const;
};

struct CameraBasis {
  Vec3 forward;
  Vec3 right;
  Vec3 up;
};

CameraBasis camera_basis(const CameraPose& camera);

struct ScreenPoint {
  double sx = 0.0;
  double sy = 0.0;
};

// World-space ray through a screen point.
Ray screen_ray(const CameraPose& camera, ScreenPoint p);

// Screen coordinates of a world point; absent when the point is not in
// front of the camera. Points outside the frustum yield |sx| > 1 or |sy| > 1.
std::optional<ScreenPoint> project(const CameraPose& camera, Vec3 world);

inline bool in_frustum(ScreenPoint p) {
  return p.sx >= -1.0 && p.sx <= 1.0 && p.sy >= -1.0 && p.sy <= 1.0;
}

}  // namespace ivsr
