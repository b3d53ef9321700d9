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

#include "ivsr/scenario_library.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>

#include "ivsr/error.hpp"
#include "ivsr/json_io.hpp"

namespace ivsr {
namespace {

void require_count(std::int64_t v, const char* name) {
  if (v < 0) throw Error(ErrorCode::kInvalidArgument, std::string(name) + " must be >= 0");
}

void require_unit(double v, const std::string& what) {
  if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::kInvalidArgument, what + " must lie in [0, 1]");
}

double angular_distance(double a, double b) {
  const double d = std::fabs(std::fmod(a - b, 360.0));
  return std::min(d, 360.0 - d) / 180.0;
}

double jaccard_distance(const PathObjects& a, const PathObjects& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  for (PathObject o : a) common += b.count(o);
  const std::size_t total = a.size() + b.size() - common;
  return 1.0 - static_cast<double>(common) / static_cast<double>(total);
}

std::vector<double> areas_of(const std::vector<std::pair<double, double>>& series) {
  std::vector<double> out;
  out.reserve(series.size());
  for (const auto& sample : series) out.push_back(sample.second);
  return out;
}

}  // namespace

void FeatureVector::validate() const {
  require_count(responders, "responders");
  require_count(fire_trucks, "fire_trucks");
  require_count(helicopters, "helicopters");
  require_count(ambulances, "ambulances");
  if (!(wind_direction >= 0.0 && wind_direction < 360.0)) {
    throw Error(ErrorCode::kInvalidArgument, "wind_direction must lie in [0, 360)");
  }
  if (!std::isfinite(wind_speed) || !std::isfinite(spread_rate) || !std::isfinite(max_temp)) {
    throw Error(ErrorCode::kInvalidArgument, "feature values must be finite");
  }
}

double normalize(double value, Range range) {
  if (!(range.hi > range.lo)) return 0.0;
  return std::clamp((value - range.lo) / (range.hi - range.lo), 0.0, 1.0);
}

FeatureWeights equal_weights() {
  FeatureWeights w;
  w.fill(1.0 / static_cast<double>(kFeatureCount));
  return w;
}

double static_distance(const FeatureVector& a, const FeatureVector& b,
                       const FeatureWeights& weights, const NormalizationRanges& ranges) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kBadWeights, "weights must be non-negative");
    }
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9) throw Error(ErrorCode::kBadWeights, "weights must sum to 1");

  auto numeric = [](double x, double y, Range r) {
    return std::fabs(normalize(x, r) - normalize(y, r));
  };
  auto count = [&](std::int64_t x, std::int64_t y) {
    return numeric(static_cast<double>(x), static_cast<double>(y), ranges.count);
  };
  const std::array<double, kFeatureCount> terms = {
      numeric(static_cast<double>(a.severity), static_cast<double>(b.severity), ranges.severity),
      count(a.responders, b.responders),
      count(a.fire_trucks, b.fire_trucks),
      count(a.helicopters, b.helicopters),
      count(a.ambulances, b.ambulances),
      a.material_class == b.material_class ? 0.0 : 1.0,
      numeric(a.wind_speed, b.wind_speed, ranges.wind),
      angular_distance(a.wind_direction, b.wind_direction),
      numeric(a.spread_rate, b.spread_rate, ranges.spread),
      numeric(a.max_temp, b.max_temp, ranges.temp),
      jaccard_distance(a.objects_in_path, b.objects_in_path),
  };
  double d = 0.0;
  for (std::size_t i = 0; i < kFeatureCount; ++i) d += weights[i] * terms[i];
  return d;
}

double dtw(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::kEmptySeries, "dtw needs non-empty series");
  const std::size_t n = a.size(), m = b.size();
  struct Cell {
    double cost;
    std::size_t length;
    bool operator<(const Cell& o) const {
      return cost < o.cost || (cost == o.cost && length < o.length);
    }
  };
  std::vector<Cell> prev(m), cur(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double local = std::fabs(a[i] - b[j]);
      if (i == 0 && j == 0) {
        cur[j] = {local, 1};
        continue;
      }
      Cell best{std::numeric_limits<double>::infinity(), 0};
      if (i > 0 && j > 0 && prev[j - 1] < best) best = prev[j - 1];
      if (i > 0 && prev[j] < best) best = prev[j];
      if (j > 0 && cur[j - 1] < best) best = cur[j - 1];
      cur[j] = {best.cost + local, best.length + 1};
    }
    std::swap(prev, cur);
  }
  const Cell& end = prev[m - 1];
  return end.cost / static_cast<double>(end.length);
}

std::vector<double> growth_rates(std::span<const double> cumulative) {
  std::vector<double> out(cumulative.size());
  double last = 0.0;
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    out[i] = cumulative[i] - last;
    last = cumulative[i];
  }
  return out;
}

double spread_rate_kmh(std::span<const std::pair<double, double>> series) {
  auto first = std::find_if(series.begin(), series.end(), [](auto& s) { return s.second > 0.0; });
  if (first == series.end()) return 0.0;
  const auto& last = series.back();
  const double span = last.first - first->first;
  if (!(span > 0.0)) return 0.0;
  const double r0 = std::sqrt(first->second / std::numbers::pi);
  const double r1 = std::sqrt(last.second / std::numbers::pi);
  return (r1 - r0) / span * 3.6;
}

namespace {

constexpr std::array<std::pair<ActionKind, std::string_view>, 6> kActionKinds{{
    {ActionKind::kDeployCrew, "deploy_crew"},
    {ActionKind::kDeployTruck, "deploy_truck"},
    {ActionKind::kAerialDrop, "aerial_drop"},
    {ActionKind::kDeployDrone, "deploy_drone"},
    {ActionKind::kEvacuateZone, "evacuate_zone"},
    {ActionKind::kActivateSprinklers, "activate_sprinklers"},
}};

}  // namespace

std::string_view to_string(ActionKind k) {
  for (const auto& [v, text] : kActionKinds) {
    if (v == k) return text;
  }
  return "?";
}

ActionKind action_kind_from_string(std::string_view name) {
  for (const auto& [v, text] : kActionKinds) {
    if (text == name) return v;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown action kind '" + std::string(name) + "'");
}

std::optional<ResourceKind> resource_for(ActionKind k) {
  switch (k) {
    case ActionKind::kDeployCrew: return ResourceKind::kFirefighter;
    case ActionKind::kDeployTruck: return ResourceKind::kFireTruck;
    case ActionKind::kAerialDrop: return ResourceKind::kHelicopter;
    case ActionKind::kDeployDrone: return ResourceKind::kDrone;
    case ActionKind::kEvacuateZone:
    case ActionKind::kActivateSprinklers: return std::nullopt;
  }
  return std::nullopt;
}

void InterventionPlan::validate() const {
  if (id.empty()) throw Error(ErrorCode::kInvalidArgument, "plan with empty id");
  if (actions.empty()) throw Error(ErrorCode::kInvalidArgument, "plan '" + id + "' has no actions");
  for (const Action& a : actions) {
    if (a.quantity < 0) {
      throw Error(ErrorCode::kInvalidArgument, "plan '" + id + "': negative quantity");
    }
  }
  require_unit(effectiveness, "plan '" + id + "' effectiveness");
  require_unit(cost_efficiency, "plan '" + id + "' cost_efficiency");
  require_unit(response_speed, "plan '" + id + "' response_speed");
}

void ScenarioRecord::validate() const {
  if (id.empty()) throw Error(ErrorCode::kInvalidArgument, "scenario with empty id");
  features.validate();
  if (growth.empty()) throw Error(ErrorCode::kInvalidArgument, "scenario '" + id + "' has no growth");
  if (!std::is_sorted(growth.begin(), growth.end())) {
    throw Error(ErrorCode::kInvalidArgument, "scenario '" + id + "' growth decreases");
  }
  if (plans.empty()) throw Error(ErrorCode::kInvalidArgument, "scenario '" + id + "' has no plans");
  for (const InterventionPlan& p : plans) p.validate();
}

ScenarioLibrary::ScenarioLibrary(std::vector<ScenarioRecord> records) : records_(std::move(records)) {
  for (const ScenarioRecord& r : records_) r.validate();
  std::sort(records_.begin(), records_.end(),
            [](const ScenarioRecord& a, const ScenarioRecord& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < records_.size(); ++i) {
    if (records_[i].id == records_[i - 1].id) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate scenario id '" + records_[i].id + "'");
    }
  }
}

const ScenarioRecord* ScenarioLibrary::find(std::string_view id) const {
  auto it = std::lower_bound(records_.begin(), records_.end(), id,
                             [](const ScenarioRecord& r, std::string_view key) { return r.id < key; });
  return it != records_.end() && it->id == id ? &*it : nullptr;
}

ScenarioLibrary ScenarioLibrary::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kStorageError, "library directory " + dir.string() + " not found");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ScenarioRecord> records;
  records.reserve(files.size());
  for (const auto& f : files) records.push_back(from_document<ScenarioRecord>(read_json_file(f), f.string()));
  return ScenarioLibrary(std::move(records));
}

void ScenarioLibrary::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (const ScenarioRecord& r : records_) write_json_file(dir / (r.id + ".json"), r);
}

FeatureVector featurize(const StatusLog& status) {
  FeatureVector f;
  f.severity = status.alert_level;
  f.responders = std::max<std::int64_t>(0, status.count(ResourceKind::kFirefighter));
  f.fire_trucks = std::max<std::int64_t>(0, status.count(ResourceKind::kFireTruck));
  f.helicopters = std::max<std::int64_t>(0, status.count(ResourceKind::kHelicopter));
  f.ambulances = std::max<std::int64_t>(0, status.count(ResourceKind::kAmbulance));

  if (status.material_class) {
    f.material_class = *status.material_class;
  } else if (status.spread && !status.fire_events.empty()) {
    const Surface* s = status.spread->scene().scene().find(status.fire_events.front().surface_id);
    if (s) f.material_class = material_class_for_tag(s->material_tag);
  }

  if (std::isfinite(status.env.wind_speed)) f.wind_speed = std::max(0.0, status.env.wind_speed);
  const double dir = std::fmod(status.env.wind_direction, 360.0);
  f.wind_direction = std::isfinite(dir) ? (dir < 0.0 ? dir + 360.0 : dir) : 0.0;
  if (f.wind_direction >= 360.0) f.wind_direction = 0.0;

  if (status.spread_rate) {
    f.spread_rate = *status.spread_rate;
  } else if (status.spread) {
    f.spread_rate = spread_rate_kmh(status.spread->burning_area_series());
  }

  f.max_temp = std::isfinite(status.env.air_temp) ? status.env.air_temp : 0.0;
  for (const FireEvent& e : status.fire_events) f.max_temp = std::max(f.max_temp, e.peak_temp);
  f.objects_in_path = status.objects_in_path;
  return f;
}

std::vector<MatchResult> match(const ScenarioLibrary& library, const FeatureVector& features,
                               std::span<const double> growth, std::size_t k,
                               const MatchConfig& config) {
  if (library.empty()) throw Error(ErrorCode::kEmptyLibrary, "scenario library is empty");
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (growth.empty()) throw Error(ErrorCode::kEmptySeries, "query growth series is empty");
  if (!(config.alpha >= 0.0) || !(config.beta >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha and beta must be non-negative");
  }
  const auto& records = library.records();
  const std::vector<double> query_rates = growth_rates(growth);

  std::vector<double> statics(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    statics[i] = static_distance(features, records[i].features, config.weights, config.ranges);
  }
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  // Records are id-sorted, so a stable sort keeps id order among equal bounds.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return statics[a] < statics[b]; });

  auto better = [&](const MatchResult& a, const MatchResult& b) {
    return a.combined < b.combined || (a.combined == b.combined && a.scenario_id < b.scenario_id);
  };
  std::vector<MatchResult> best;
  for (std::size_t idx : order) {
    const double bound = config.alpha * statics[idx];
    if (best.size() == k && bound > best.back().combined) break;
    const ScenarioRecord& r = records[idx];
    const std::vector<double> rates = growth_rates(r.growth);
    MatchResult m{r.id, statics[idx], dtw(query_rates, rates), 0.0};
    m.combined = config.alpha * m.static_distance + config.beta * m.temporal_distance;
    if (best.size() == k && !better(m, best.back())) continue;
    best.insert(std::upper_bound(best.begin(), best.end(), m, better), m);
    if (best.size() > k) best.pop_back();
  }
  return best;
}

std::vector<MatchResult> match(const ScenarioLibrary& library, const StatusLog& status,
                               std::size_t k, const MatchConfig& config) {
  std::vector<double> growth;
  if (status.spread) growth = areas_of(status.spread->burning_area_series());
  if (growth.empty()) growth.push_back(0.0);
  return match(library, featurize(status), growth, k, config);
}

std::vector<ScenarioRecord> precompute_library(const Scene& scene,
                                               const std::vector<MaterialProfile>& materials,
                                               const ScenarioGrid& grid,
                                               const std::vector<InterventionPlan>& plan_templates) {
  if (grid.size() == 0) throw Error(ErrorCode::kEmptyGrid, "scenario grid is empty");
  if (plan_templates.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "precompute needs at least one plan template");
  }

  std::vector<SceneHandle> fueled;
  for (const std::string& tag : grid.materials) {
    std::vector<Surface> surfaces = scene.surfaces();
    for (Surface& s : surfaces) {
      if (s.collidable) s.material_tag = tag;
    }
    fueled.push_back(std::make_shared<const TessellatedScene>(Scene(std::move(surfaces), scene.bounds()),
                                                              grid.patch_size));
  }

  std::vector<ScenarioRecord> out;
  out.reserve(grid.size());
  SpreadConfig config;
  config.dt = grid.dt;
  for (std::size_t i = 0; i < grid.wind_speeds.size(); ++i) {
    for (std::size_t j = 0; j < grid.humidities.size(); ++j) {
      for (std::size_t m = 0; m < grid.materials.size(); ++m) {
        for (std::size_t s = 0; s < grid.ignition_sites.size(); ++s) {
          Environment env{grid.air_temp, grid.humidities[j], grid.wind_speeds[i], grid.wind_direction};
          const Vec3 site = grid.ignition_sites[s];
          SpreadState state(fueled[m], materials, {{site, 0.0}}, env, config);
          state.advance_to(grid.horizon, grid.dt);

          ScenarioRecord r;
          r.id = "scn-w" + std::to_string(i) + "-h" + std::to_string(j) + "-m" + std::to_string(m) +
                 "-s" + std::to_string(s);
          r.features = grid.base;
          r.features.wind_speed = env.wind_speed;
          r.features.wind_direction = env.wind_direction;
          r.features.material_class = material_class_for_tag(grid.materials[m]);
          r.features.spread_rate = spread_rate_kmh(state.burning_area_series());
          r.growth = areas_of(state.burning_area_series());
          if (r.growth.empty()) r.growth.push_back(0.0);
          for (InterventionPlan plan : plan_templates) {
            for (Action& a : plan.actions) {
              const auto* zone = std::get_if<std::string>(&a.target);
              if (zone && *zone == kIgnitionTarget) a.target = site;
            }
            r.plans.push_back(std::move(plan));
          }
          r.validate();
          out.push_back(std::move(r));
        }
      }
    }
  }
  return out;
}

}  // namespace ivsr
