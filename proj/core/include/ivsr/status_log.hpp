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

// Live status log: what the twin currently knows about the incident.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ivsr/geometry.hpp"
#include "ivsr/localization.hpp"
#include "ivsr/spread.hpp"

namespace ivsr {

enum class Severity : std::uint8_t { kLow = 0, kMedium = 1, kHigh = 2 };

std::string_view to_string(Severity s);
Severity severity_from_string(std::string_view name);  // throws kInvalidArgument

// "probable fire" -> high, "fire hazard" -> medium, anything else -> low.
Severity severity_from_threat(std::string_view threat_level);

enum class ResourceKind : std::uint8_t { kFirefighter, kFireTruck, kHelicopter, kAmbulance, kDrone };

std::string_view to_string(ResourceKind k);
ResourceKind resource_kind_from_string(std::string_view name);  // throws kInvalidArgument

struct Resource {
  ResourceKind kind = ResourceKind::kFirefighter;
  std::int64_t count = 0;
  Vec3 position;
  std::int64_t available = 0;  // units not committed elsewhere, <= count

  bool operator==(const Resource&) const = default;
};

enum class MaterialClass : std::uint8_t {
  kForestDryVegetation = 0,
  kUrbanIndustrial = 1,
  kIndoorResidential = 2,
};

std::string_view to_string(MaterialClass m);
MaterialClass material_class_from_string(std::string_view name);  // throws kInvalidArgument

// Coarse class of a material tag: vegetation-like tags are forest, wood and
// furnishing tags are indoor residential, everything else is urban industrial.
MaterialClass material_class_for_tag(std::string_view tag);

enum class PathObject : std::uint8_t { kTrees, kPowerLines, kStructures };

std::string_view to_string(PathObject o);
PathObject path_object_from_string(std::string_view name);  // throws kInvalidArgument

using PathObjects = std::set<PathObject>;

struct StatusLog {
  std::vector<FireEvent> fire_events;
  std::shared_ptr<const SpreadState> spread;  // may be null
  Environment env;
  std::vector<Resource> resources;
  Severity alert_level = Severity::kLow;
  // Observations that override values derived from the snapshot.
  std::optional<MaterialClass> material_class;
  std::optional<double> spread_rate;  // km/h
  PathObjects objects_in_path;

  void validate() const;  // throws kInvalidArgument on negative counts

  std::int64_t count(ResourceKind kind) const;
  std::int64_t available(ResourceKind kind) const;
};

}  // namespace ivsr
