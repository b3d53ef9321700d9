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

#include "ivsr/incident_log.hpp"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "ivsr/error.hpp"

namespace ivsr {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 8> kFields = {
    "FireThreatLevel", "StartDateTime", "CPUTemperature", "SensorId",
    "Column",          "Row",           "Temperature",    "Number"};

const ordered_json& require(const ordered_json& doc, std::string_view key) {
  auto it = doc.find(std::string(key));
  if (it == doc.end()) {
    throw Error(ErrorCode::kSchemaError, "missing field " + std::string(key));
  }
  return *it;
}

std::string require_string(const ordered_json& doc, std::string_view key) {
  const ordered_json& v = require(doc, key);
  if (!v.is_string()) {
    throw Error(ErrorCode::kSchemaError, std::string(key) + " must be a string");
  }
  return v.get<std::string>();
}

std::int64_t require_count(const ordered_json& doc, std::string_view key) {
  const std::string s = require_string(doc, key);
  std::int64_t value = 0;
  const bool digits_only =
      !s.empty() && s.size() <= 18 && s.find_first_not_of("0123456789") == std::string::npos;
  if (!digits_only ||
      std::from_chars(s.data(), s.data() + s.size(), value).ec != std::errc{}) {
    throw Error(ErrorCode::kSchemaError,
                std::string(key) + " must be a non-negative integer string, got \"" + s + "\"");
  }
  return value;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  std::string s(buf.data(), r.ptr);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string quoted(const std::string& s) { return ordered_json(s).dump(); }

}  // namespace

DetectionRecord parse_detection(std::string_view line) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(line.begin(), line.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kSchemaError, "detection must be a JSON object");

  DetectionRecord r;
  r.fire_threat_level = require_string(doc, "FireThreatLevel");
  const std::string when = require_string(doc, "StartDateTime");
  auto ts = Timestamp::parse(when);
  if (!ts) throw Error(ErrorCode::kSchemaError, "bad StartDateTime \"" + when + "\"");
  r.start_datetime = *ts;
  const ordered_json& cpu = require(doc, "CPUTemperature");
  if (!cpu.is_number() || !std::isfinite(cpu.get<double>())) {
    throw Error(ErrorCode::kSchemaError, "CPUTemperature must be a finite number");
  }
  r.cpu_temperature = cpu.get<double>();
  r.sensor_id = require_string(doc, "SensorId");
  r.column = require_count(doc, "Column");
  r.row = require_count(doc, "Row");
  r.temperature = require_count(doc, "Temperature");
  r.number = require_count(doc, "Number");

  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (std::find(kFields.begin(), kFields.end(), it.key()) == kFields.end()) {
      r.extras[it.key()] = it.value();
    }
  }
  return r;
}

std::string serialize_detection(const DetectionRecord& r) {
  std::string out = "{";
  out += "\"FireThreatLevel\": " + quoted(r.fire_threat_level);
  out += ", \"StartDateTime\": " + quoted(r.start_datetime.to_string());
  out += ", \"CPUTemperature\": " + format_number(r.cpu_temperature);
  out += ", \"SensorId\": " + quoted(r.sensor_id);
  out += ", \"Column\": " + quoted(std::to_string(r.column));
  out += ", \"Row\": " + quoted(std::to_string(r.row));
  out += ", \"Temperature\": " + quoted(std::to_string(r.temperature));
  out += ", \"Number\": " + quoted(std::to_string(r.number));
  for (auto it = r.extras.begin(); it != r.extras.end(); ++it) {
    out += ", " + quoted(it.key()) + ": " + it.value().dump();
  }
  out += "}";
  return out;
}

IncidentStore::IncidentStore(std::filesystem::path path) : path_(std::move(path)) {
  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_);
    if (!in) throw Error(ErrorCode::kStorageError, "cannot read " + path_.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      try {
        DetectionRecord r = parse_detection(line);
        by_time_.emplace(r.start_datetime, records_.size());
        records_.push_back(std::move(r));
      } catch (const Error& e) {
        throw Error(ErrorCode::kStorageError,
                    path_.string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
  }
  file_ = std::fopen(path_.c_str(), "a");
  if (!file_) throw Error(ErrorCode::kStorageError, "cannot open " + path_.string());
}

IncidentStore::~IncidentStore() {
  if (file_) std::fclose(file_);
}

RecordId IncidentStore::append(const DetectionRecord& record) {
  const std::string line = serialize_detection(record) + "\n";
  std::unique_lock lock(mutex_);
  if (file_) {
    if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() || std::fflush(file_) != 0 ||
        ::fsync(::fileno(file_)) != 0) {
      throw Error(ErrorCode::kStorageError, "append to " + path_.string() + " failed");
    }
  }
  const RecordId id = records_.size();
  by_time_.emplace(record.start_datetime, id);
  records_.push_back(record);
  return id;
}

std::vector<StoredRecord> IncidentStore::query(const TimeRange& range,
                                               const std::optional<std::string>& sensor) const {
  std::shared_lock lock(mutex_);
  std::vector<StoredRecord> out;
  auto it = range.from ? by_time_.lower_bound(*range.from) : by_time_.begin();
  for (; it != by_time_.end(); ++it) {
    if (range.to && it->first > *range.to) break;
    const DetectionRecord& r = records_[it->second];
    if (sensor && r.sensor_id != *sensor) continue;
    out.push_back({it->second, r});
  }
  return out;
}

std::optional<DetectionRecord> IncidentStore::get(RecordId id) const {
  std::shared_lock lock(mutex_);
  if (id >= records_.size()) return std::nullopt;
  return records_[id];
}

std::size_t IncidentStore::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

ReplayEvent replay(const IncidentStore& store, RecordId id, const Scene& scene,
                   const SensorRegistry& sensors) {
  auto record = store.get(id);
  if (!record) throw Error(ErrorCode::kNotFound, "no record " + std::to_string(id));
  const CameraPose* camera = sensors.camera_for(record->sensor_id);
  if (!camera) {
    throw Error(ErrorCode::kNotFound, "no camera bound to sensor '" + record->sensor_id + "'");
  }
  ReplayEvent ev;
  ev.source_record_id = id;
  ev.fire_event = localize(scene, *camera, *record, id);
  ev.lifetime = kReplayLifetimeSeconds;
  return ev;
}

}  // namespace ivsr
