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

// JSON documents for every file format and wire message.

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "ivsr/camera.hpp"
#include "ivsr/command_loop.hpp"
#include "ivsr/coverage.hpp"
#include "ivsr/error.hpp"
#include "ivsr/geometry.hpp"
#include "ivsr/incident_log.hpp"
#include "ivsr/localization.hpp"
#include "ivsr/scenario_library.hpp"
#include "ivsr/spread.hpp"
#include "ivsr/status_log.hpp"

namespace ivsr {

using nlohmann::json;

void to_json(json& j, const Vec3& v);
void from_json(const json& j, Vec3& v);
void to_json(json& j, const Aabb& b);
void from_json(const json& j, Aabb& b);
void to_json(json& j, const Triangle& t);
void from_json(const json& j, Triangle& t);
void to_json(json& j, const Surface& s);
void from_json(const json& j, Surface& s);
void to_json(json& j, const Timestamp& t);
void from_json(const json& j, Timestamp& t);

void to_json(json& j, const CameraPose& c);
void from_json(const json& j, CameraPose& c);
void to_json(json& j, const Hit& h);
void to_json(json& j, const CoverageReport& r);
void to_json(json& j, const PlacementResult& r);

void to_json(json& j, const FireEvent& e);
void from_json(const json& j, FireEvent& e);
void to_json(json& j, const ReplayEvent& e);

void to_json(json& j, const MaterialProfile& m);
void from_json(const json& j, MaterialProfile& m);
void to_json(json& j, const Environment& e);
void from_json(const json& j, Environment& e);

void to_json(json& j, const Resource& r);
void from_json(const json& j, Resource& r);
void to_json(json& j, const StatusLog& s);

void to_json(json& j, const FeatureVector& f);
void from_json(const json& j, FeatureVector& f);
void to_json(json& j, const Action& a);
void from_json(const json& j, Action& a);
void to_json(json& j, const InterventionPlan& p);
void from_json(const json& j, InterventionPlan& p);
void to_json(json& j, const ScenarioRecord& r);
void from_json(const json& j, ScenarioRecord& r);
void to_json(json& j, const ScenarioGrid& g);
void from_json(const json& j, ScenarioGrid& g);
void to_json(json& j, const MatchResult& m);

void to_json(json& j, const RoutePlan& r);
void from_json(const json& j, RoutePlan& r);
void to_json(json& j, const Decision& d);
void from_json(const json& j, Decision& d);
void to_json(json& j, const Outcome& o);
void from_json(const json& j, Outcome& o);
void to_json(json& j, const DispatchRecord& d);
void from_json(const json& j, DispatchRecord& d);
void to_json(json& j, const CommandTicket& t);
void to_json(json& j, const LedgerEntry& e);
void to_json(json& j, const Recommendation& r);
void to_json(json& j, const TicketEvent& e);
void from_json(const json& j, TicketEvent& e);

// {"bounds": {...}, "surfaces": [...]} or {"room": {width, depth, height,
// material?, floor_material?}}.
Scene scene_from_json(const json& j);
json scene_to_json(const Scene& scene);

// {"default": id?, "cameras": [CameraPose, ...]}
SensorRegistry sensors_from_json(const json& j);
json sensors_to_json(const SensorRegistry& sensors);

// Arrival map and growth series of a run.
json spread_summary(const SpreadState& state);

// Throws kStorageError when unreadable, kParseError on malformed JSON.
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& doc);

// Converts with nlohmann errors mapped to kSchemaError.
template <typename T>
T from_document(const json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, what + ": " + e.what());
  }
}

}  // namespace ivsr
