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

// Maps a sensor's hottest-pixel report through the sensor's virtual camera
// into a 3D fire event on the scene.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ivsr/camera.hpp"
#include "ivsr/geometry.hpp"
#include "ivsr/timestamp.hpp"

namespace ivsr {

struct DetectionRecord;

using FireEventId = std::uint64_t;

struct FireEvent {
  FireEventId id = 0;
  Vec3 position;
  std::string surface_id;
  std::string threat_level;
  double peak_temp = 0.0;
  std::int64_t pixel_count = 0;
  Timestamp timestamp;
  std::string sensor_id;
};

inline constexpr double kDefaultMergeRadius = 0.5;
inline constexpr double kDefaultMergeWindow = 10.0;

// sensor_id -> camera. Records with an empty SensorId resolve to the default
// sensor.
class SensorRegistry {
 public:
  void bind(const CameraPose& camera);  // keyed by camera.sensor_id, must be non-empty
  void set_default(std::string sensor_id) { default_sensor_ = std::move(sensor_id); }

  const CameraPose* camera_for(const std::string& sensor_id) const;
  const std::string& default_sensor() const { return default_sensor_; }
  const std::map<std::string, CameraPose>& cameras() const { return cameras_; }
  bool empty() const { return cameras_.empty(); }

 private:
  std::map<std::string, CameraPose> cameras_;
  std::string default_sensor_;
};

// Ray through the center of pixel (column, row). Throws kPixelOutOfRange.
Ray pixel_to_ray(const CameraPose& camera, int column, int row);

// Continuous pixel coordinates of a world point (pixel k spans [k, k+1));
// absent when behind the camera.
std::optional<std::pair<double, double>> project_to_pixel(const CameraPose& camera, Vec3 world);

// Throws kLocalizationMiss when the pixel ray leaves the scene without
// hitting a collidable surface.
FireEvent localize(const Scene& scene, const CameraPose& camera, const DetectionRecord& record,
                   FireEventId id = 0);

// Single-linkage clustering: events within `radius` metres and `window`
// seconds of each other (transitively) collapse into one event at the
// cluster centroid. radius == 0 disables merging.
std::vector<FireEvent> merge_events(std::vector<FireEvent> events,
                                    double radius = kDefaultMergeRadius,
                                    double window = kDefaultMergeWindow);

}  // namespace ivsr
