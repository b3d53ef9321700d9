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

// Library of pre-simulated fire scenarios and the similarity engine used to
// retrieve the closest ones for a live incident.
//
// Similarity blends a weighted static distance over feature vectors with a
// dynamic-time-warping distance between growth-rate series:
//
//   combined = alpha · static + beta · dtw(rates(query), rates(scenario))

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ivsr/geometry.hpp"
#include "ivsr/spread.hpp"
#include "ivsr/status_log.hpp"

namespace ivsr {

struct FeatureVector {
  Severity severity = Severity::kLow;
  std::int64_t responders = 0;
  std::int64_t fire_trucks = 0;
  std::int64_t helicopters = 0;
  std::int64_t ambulances = 0;
  MaterialClass material_class = MaterialClass::kForestDryVegetation;
  double wind_speed = 0.0;      // km/h
  double wind_direction = 0.0;  // degrees
  double spread_rate = 0.0;     // km/h
  double max_temp = 0.0;        // °C
  PathObjects objects_in_path;

  void validate() const;  // throws kInvalidArgument
  bool operator==(const FeatureVector&) const = default;
};

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

struct NormalizationRanges {
  Range wind{0.0, 120.0};
  Range spread{0.0, 10.0};
  Range temp{0.0, 1200.0};
  Range count{0.0, 100.0};
  Range severity{0.0, 2.0};
};

// Min-max normalization clamped to [0, 1].
double normalize(double value, Range range);

// Per-feature weights, in FeatureVector field order.
inline constexpr std::size_t kFeatureCount = 11;
using FeatureWeights = std::array<double, kFeatureCount>;
FeatureWeights equal_weights();

// Throws kBadWeights unless the weights are non-negative and sum to 1.
double static_distance(const FeatureVector& a, const FeatureVector& b,
                       const FeatureWeights& weights = equal_weights(),
                       const NormalizationRanges& ranges = {});

// DTW with |a_i - b_j| local cost over match/insert/delete steps. Among
// minimum-cost warping paths the shortest is taken, and the cost is divided
// by its length. Throws kEmptySeries.
double dtw(std::span<const double> a, std::span<const double> b);

// Per-tick increments of a cumulative series; the first sample counts from 0.
std::vector<double> growth_rates(std::span<const double> cumulative);

// Equivalent-circle radius growth of a burning-area series, in km/h.
double spread_rate_kmh(std::span<const std::pair<double, double>> series);

enum class ActionKind : std::uint8_t {
  kDeployCrew,
  kDeployTruck,
  kAerialDrop,
  kDeployDrone,
  kEvacuateZone,
  kActivateSprinklers,
};

std::string_view to_string(ActionKind k);
ActionKind action_kind_from_string(std::string_view name);  // throws kInvalidArgument

// The resource an action consumes, if any.
std::optional<ResourceKind> resource_for(ActionKind k);

using ActionTarget = std::variant<Vec3, std::string>;  // point or zone id

struct Action {
  ActionKind kind = ActionKind::kDeployCrew;
  ActionTarget target;
  std::int64_t quantity = 1;

  bool operator==(const Action&) const = default;
};

struct InterventionPlan {
  std::string id;
  std::vector<Action> actions;
  double effectiveness = 0.0;
  double cost_efficiency = 0.0;
  double response_speed = 0.0;

  void validate() const;  // throws kInvalidArgument
  bool operator==(const InterventionPlan&) const = default;
};

struct ScenarioRecord {
  std::string id;
  FeatureVector features;
  std::vector<double> growth;  // cumulative burning area per tick, m²
  std::vector<InterventionPlan> plans;

  void validate() const;  // throws kInvalidArgument
  bool operator==(const ScenarioRecord&) const = default;
};

struct MatchConfig {
  double alpha = 0.7;
  double beta = 0.3;
  FeatureWeights weights = equal_weights();
  NormalizationRanges ranges;
};

struct MatchResult {
  std::string scenario_id;
  double static_distance = 0.0;
  double temporal_distance = 0.0;
  double combined = 0.0;
};

// Immutable, id-sorted set of scenarios.
class ScenarioLibrary {
 public:
  ScenarioLibrary() = default;
  // Validates every record; throws kInvalidArgument on duplicate ids.
  explicit ScenarioLibrary(std::vector<ScenarioRecord> records);

  const std::vector<ScenarioRecord>& records() const { return records_; }
  const ScenarioRecord* find(std::string_view id) const;
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  // One <id>.json document per scenario.
  static ScenarioLibrary load(const std::filesystem::path& dir);
  void save(const std::filesystem::path& dir) const;

 private:
  std::vector<ScenarioRecord> records_;
};

// Deterministic and total: missing values default to zero or empty.
FeatureVector featurize(const StatusLog& status);

// Top-k scenarios by ascending combined distance, ties by scenario id.
// Throws kEmptyLibrary, kInvalidArgument for k < 1.
std::vector<MatchResult> match(const ScenarioLibrary& library, const FeatureVector& features,
                               std::span<const double> growth, std::size_t k,
                               const MatchConfig& config = {});
std::vector<MatchResult> match(const ScenarioLibrary& library, const StatusLog& status,
                               std::size_t k, const MatchConfig& config = {});

// Zone id an action target may use to mean the scenario's ignition site.
inline constexpr std::string_view kIgnitionTarget = "ignition";

struct ScenarioGrid {
  std::vector<double> wind_speeds;   // km/h
  double wind_direction = 0.0;       // degrees
  std::vector<double> humidities;    // percent
  std::vector<std::string> materials;  // fuel tag applied to every collidable surface
  std::vector<Vec3> ignition_sites;
  double air_temp = 20.0;
  double horizon = 60.0;  // seconds
  double dt = 0.5;
  double patch_size = 0.25;
  // Fields copied into every scenario's features; wind, material class and
  // spread rate are filled in per grid point.
  FeatureVector base;

  std::size_t size() const {
    return wind_speeds.size() * humidities.size() * materials.size() * ignition_sites.size();
  }
};

// One scenario per (wind, humidity, material, site). Ids are
// "scn-w<i>-h<j>-m<k>-s<l>". Throws kEmptyGrid, or propagates spread errors.
std::vector<ScenarioRecord> precompute_library(const Scene& scene,
                                               const std::vector<MaterialProfile>& materials,
                                               const ScenarioGrid& grid,
                                               const std::vector<InterventionPlan>& plan_templates);

}  // namespace ivsr
