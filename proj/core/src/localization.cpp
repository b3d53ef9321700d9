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

#include "ivsr/localization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ivsr/error.hpp"
#include "ivsr/incident_log.hpp"

namespace ivsr {

void SensorRegistry::bind(const CameraPose& camera) {
  if (camera.sensor_id.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "sensor binding needs a non-empty sensor_id");
  }
  camera.validate();
  cameras_[camera.sensor_id] = camera;
  if (default_sensor_.empty()) default_sensor_ = camera.sensor_id;
}

const CameraPose* SensorRegistry::camera_for(const std::string& sensor_id) const {
  const std::string& key = sensor_id.empty() ? default_sensor_ : sensor_id;
  auto it = cameras_.find(key);
  return it == cameras_.end() ? nullptr : &it->second;
}

Ray pixel_to_ray(const CameraPose& camera, int column, int row) {
  camera.validate();
  if (column < 0 || column >= camera.pixel_cols || row < 0 || row >= camera.pixel_rows) {
    throw Error(ErrorCode::kPixelOutOfRange,
                "pixel (" + std::to_string(column) + ", " + std::to_string(row) +
                    ") outside " + std::to_string(camera.pixel_cols) + "x" +
                    std::to_string(camera.pixel_rows));
  }
  const double sx = (2.0 * column + 1.0) / camera.pixel_cols - 1.0;
  const double sy = 1.0 - (2.0 * row + 1.0) / camera.pixel_rows;
  return screen_ray(camera, {sx, sy});
}

std::optional<std::pair<double, double>> project_to_pixel(const CameraPose& camera, Vec3 world) {
  auto sp = project(camera, world);
  if (!sp) return std::nullopt;
  return std::pair{(sp->sx + 1.0) * 0.5 * camera.pixel_cols,
                   (1.0 - sp->sy) * 0.5 * camera.pixel_rows};
}

FireEvent localize(const Scene& scene, const CameraPose& camera, const DetectionRecord& record,
                   FireEventId id) {
  if (record.column > camera.pixel_cols - 1 || record.row > camera.pixel_rows - 1) {
    throw Error(ErrorCode::kPixelOutOfRange, "detection pixel outside sensor grid");
  }
  const Ray ray = pixel_to_ray(camera, static_cast<int>(record.column), static_cast<int>(record.row));
  // Only collidable surfaces can carry a fire; occluders stop the ray.
  auto hit = ray_cast(scene, ray);
  if (!hit || !scene.find(hit->surface_id)->collidable) {
    throw Error(ErrorCode::kLocalizationMiss,
                "pixel ray of sensor '" + camera.sensor_id + "' left the scene");
  }
  FireEvent e;
  e.id = id;
  e.position = hit->point;
  e.surface_id = hit->surface_id;
  e.threat_level = record.fire_threat_level;
  e.peak_temp = static_cast<double>(record.temperature);
  e.pixel_count = record.number;
  e.timestamp = record.start_datetime;
  e.sensor_id = record.sensor_id.empty() ? camera.sensor_id : record.sensor_id;
  return e;
}

std::vector<FireEvent> merge_events(std::vector<FireEvent> events, double radius, double window) {
  if (radius < 0.0 || window < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "merge radius and window must be non-negative");
  }
  if (radius == 0.0 || events.size() < 2) return events;

  std::vector<std::size_t> parent(events.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  const auto window_us = static_cast<std::int64_t>(std::llround(window * 1e6));
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = i + 1; j < events.size(); ++j) {
      const std::int64_t dt = std::llabs(events[i].timestamp.micros - events[j].timestamp.micros);
      if (dt <= window_us && distance(events[i].position, events[j].position) <= radius) {
        const std::size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }

  // Clusters are emitted in order of their first member.
  std::vector<FireEvent> out;
  std::vector<std::size_t> slot(events.size(), events.size());
  std::vector<std::size_t> members(events.size(), 0);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::size_t root = find(i);
    if (slot[root] == events.size()) {
      slot[root] = out.size();
      out.push_back(events[i]);
      out.back().position = {};
      out.back().pixel_count = 0;
    }
    FireEvent& m = out[slot[root]];
    ++members[slot[root]];
    m.position += events[i].position;
    m.pixel_count += events[i].pixel_count;
    m.timestamp = std::min(m.timestamp, events[i].timestamp);
    if (events[i].peak_temp > m.peak_temp) {
      m.peak_temp = events[i].peak_temp;
      m.threat_level = events[i].threat_level;
      m.surface_id = events[i].surface_id;
      m.sensor_id = events[i].sensor_id;
    }
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k].position = out[k].position / static_cast<double>(members[k]);
  }
  return out;
}

}  // namespace ivsr
