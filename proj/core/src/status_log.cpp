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

#include "ivsr/status_log.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "ivsr/error.hpp"

namespace ivsr {
namespace {

template <typename E, std::size_t N>
E lookup(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view name,
         std::string_view what) {
  for (const auto& [value, text] : table) {
    if (text == name) return value;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown " + std::string(what) + " '" + std::string(name) + "'");
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [v, text] : table) {
    if (v == value) return text;
  }
  return "?";
}

constexpr std::array<std::pair<Severity, std::string_view>, 3> kSeverities{{
    {Severity::kLow, "low"},
    {Severity::kMedium, "medium"},
    {Severity::kHigh, "high"},
}};

constexpr std::array<std::pair<ResourceKind, std::string_view>, 5> kResources{{
    {ResourceKind::kFirefighter, "firefighter"},
    {ResourceKind::kFireTruck, "fire_truck"},
    {ResourceKind::kHelicopter, "helicopter"},
    {ResourceKind::kAmbulance, "ambulance"},
    {ResourceKind::kDrone, "drone"},
}};

constexpr std::array<std::pair<MaterialClass, std::string_view>, 3> kMaterialClasses{{
    {MaterialClass::kForestDryVegetation, "forest_dry_vegetation"},
    {MaterialClass::kUrbanIndustrial, "urban_industrial"},
    {MaterialClass::kIndoorResidential, "indoor_residential"},
}};

constexpr std::array<std::pair<PathObject, std::string_view>, 3> kPathObjects{{
    {PathObject::kTrees, "trees"},
    {PathObject::kPowerLines, "power_lines"},
    {PathObject::kStructures, "structures"},
}};

bool contains_any(std::string_view text, std::initializer_list<std::string_view> needles) {
  return std::any_of(needles.begin(), needles.end(),
                     [&](std::string_view n) { return text.find(n) != std::string_view::npos; });
}

}  // namespace

std::string_view to_string(Severity s) { return name_of(kSeverities, s); }
Severity severity_from_string(std::string_view name) {
  return lookup(kSeverities, name, "severity");
}

Severity severity_from_threat(std::string_view threat_level) {
  if (threat_level == "probable fire") return Severity::kHigh;
  if (threat_level == "fire hazard") return Severity::kMedium;
  return Severity::kLow;
}

std::string_view to_string(ResourceKind k) { return name_of(kResources, k); }
ResourceKind resource_kind_from_string(std::string_view name) {
  return lookup(kResources, name, "resource kind");
}

std::string_view to_string(MaterialClass m) { return name_of(kMaterialClasses, m); }
MaterialClass material_class_from_string(std::string_view name) {
  return lookup(kMaterialClasses, name, "material class");
}

MaterialClass material_class_for_tag(std::string_view tag) {
  if (contains_any(tag, {"vegetation", "grass", "forest", "leaves", "brush", "timber-stand"})) {
    return MaterialClass::kForestDryVegetation;
  }
  if (contains_any(tag, {"wood", "fabric", "carpet", "furniture", "paper", "residential"})) {
    return MaterialClass::kIndoorResidential;
  }
  return MaterialClass::kUrbanIndustrial;
}

std::string_view to_string(PathObject o) { return name_of(kPathObjects, o); }
PathObject path_object_from_string(std::string_view name) {
  return lookup(kPathObjects, name, "path object");
}

void StatusLog::validate() const {
  for (const Resource& r : resources) {
    if (r.count < 0 || r.available < 0 || r.available > r.count) {
      throw Error(ErrorCode::kInvalidArgument,
                  "resource '" + std::string(to_string(r.kind)) + "' has invalid counts");
    }
  }
  env.validate();
}

std::int64_t StatusLog::count(ResourceKind kind) const {
  std::int64_t n = 0;
  for (const Resource& r : resources) {
    if (r.kind == kind) n += r.count;
  }
  return n;
}

std::int64_t StatusLog::available(ResourceKind kind) const {
  std::int64_t n = 0;
  for (const Resource& r : resources) {
    if (r.kind == kind) n += r.available;
  }
  return n;
}

}  // namespace ivsr
