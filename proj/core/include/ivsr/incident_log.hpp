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

// Sensor detection log: one JSON object per line, as emitted by the fire
// sensors, e.g.
//
//   {"FireThreatLevel": "probable fire", "StartDateTime": "2024-03-17 07:05:36.137095",
//    "CPUTemperature": 50.1, "SensorId": "", "Column": "107", "Row": "67",
//    "Temperature": "107", "Number": "400"}
//
// CPUTemperature is a JSON number; Column, Row, Temperature and Number are
// non-negative integers carried as JSON strings. Unknown fields survive a
// parse/serialize round trip in their original order.

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ivsr/localization.hpp"
#include "ivsr/timestamp.hpp"

namespace ivsr {

struct DetectionRecord {
  std::string fire_threat_level;
  Timestamp start_datetime;
  double cpu_temperature = 0.0;
  std::string sensor_id;
  std::int64_t column = 0;
  std::int64_t row = 0;
  std::int64_t temperature = 0;
  std::int64_t number = 0;
  nlohmann::ordered_json extras = nlohmann::ordered_json::object();

  bool operator==(const DetectionRecord&) const = default;
};

// Throws kParseError on malformed JSON, kSchemaError on a missing field, a
// wrong type or a bad timestamp.
DetectionRecord parse_detection(std::string_view line);

// Single line, no trailing newline, byte-compatible with the sensor output.
std::string serialize_detection(const DetectionRecord& record);

using RecordId = std::uint64_t;

struct StoredRecord {
  RecordId id = 0;
  DetectionRecord record;
};

struct TimeRange {
  std::optional<Timestamp> from;  // inclusive
  std::optional<Timestamp> to;    // inclusive

  bool contains(Timestamp t) const {
    return (!from || t >= *from) && (!to || t <= *to);
  }
};

// Append-only detection log backed by a newline-delimited file (or memory
// only when no path is given). Record ids are line numbers, starting at 0.
// One writer at a time; readers see whole records only.
class IncidentStore {
 public:
  IncidentStore() = default;
  // Loads existing lines, creating the file when missing. Throws
  // kStorageError on I/O failure or an unparseable line.
  explicit IncidentStore(std::filesystem::path path);
  ~IncidentStore();

  IncidentStore(const IncidentStore&) = delete;
  IncidentStore& operator=(const IncidentStore&) = delete;

  // The line is on disk (flushed and fsync'ed) before this returns.
  RecordId append(const DetectionRecord& record);

  // Sorted by start_datetime, insertion order among equal timestamps.
  std::vector<StoredRecord> query(const TimeRange& range = {},
                                  const std::optional<std::string>& sensor = std::nullopt) const;
  std::optional<DetectionRecord> get(RecordId id) const;
  std::size_t size() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
  mutable std::shared_mutex mutex_;
  std::vector<DetectionRecord> records_;
  std::multimap<Timestamp, RecordId> by_time_;
};

inline constexpr double kReplayLifetimeSeconds = 30.0;

struct ReplayEvent {
  RecordId source_record_id = 0;
  FireEvent fire_event;
  double lifetime = kReplayLifetimeSeconds;
};

// Re-localizes a stored record. Throws kNotFound for an unknown id or an
// unbound sensor, kLocalizationMiss when the ray misses.
ReplayEvent replay(const IncidentStore& store, RecordId id, const Scene& scene,
                   const SensorRegistry& sensors);

}  // namespace ivsr
