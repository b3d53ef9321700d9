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

// Discrete-time fire spread over scene patches.
//
// Every flame source is a sphere centred on a fixed point whose reach grows
// at the effective speed
//
//   v_eff(u) = v · clamp(1.5 - humidity/100, 0.5, 1.5) · (1 + c_w · wind · max(0, u·w))
//
// where u is the unit direction from the source to the patch centroid, w the
// horizontal unit vector the wind blows toward and c_w = 0.02 per km/h. The
// reach in direction u is the time integral of v_eff(u), so environment
// changes only affect growth after they are applied.
//
// An unburned flammable patch whose centroid falls inside some source's
// reach starts igniting; it burns once its material's ignition delay has
// elapsed and then becomes a source itself. Patches are visited in patch-id
// order (surface id, then cell), which makes runs bit-reproducible.

#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ivsr/geometry.hpp"

namespace ivsr {

struct MaterialProfile {
  std::string tag;
  double ignition_delay = 0.0;  // seconds; +inf for non-flammable
  double expansion_speed = 0.1;  // m/s

  bool flammable() const { return std::isfinite(ignition_delay); }
  void validate() const;
};

// Shipped defaults; configuration, not measured values.
std::vector<MaterialProfile> default_materials();

struct Environment {
  double air_temp = 20.0;       // °C
  double humidity = 50.0;       // percent
  double wind_speed = 0.0;      // km/h
  double wind_direction = 0.0;  // degrees, compass bearing the wind blows toward

  void validate() const;  // throws kInvalidArgument
  bool operator==(const Environment&) const = default;
};

// Unit vector of the wind's travel direction; 0° = north (+y), 90° = east (+x).
Vec3 wind_vector(double direction_deg);

struct SpreadConfig {
  double wind_coefficient = 0.02;  // per km/h
  double humidity_min_multiplier = 0.5;
  double humidity_max_multiplier = 1.5;
  double dt = 0.5;
};

double humidity_multiplier(const Environment& env, const SpreadConfig& config);
double effective_speed(double base_speed, const Environment& env, const SpreadConfig& config,
                       Vec3 direction);

struct Ignition {
  Vec3 point;
  double time = 0.0;
};

struct FlameSource {
  std::uint32_t id = 0;
  Vec3 center;
  double ignite_time = 0.0;
  double base_speed = 0.0;
  // reach(u) = isotropic + Σ wind_terms[k].second · max(0, u · wind_terms[k].first)
  double isotropic = 0.0;
  std::vector<std::pair<Vec3, double>> wind_terms;

  double reach(Vec3 direction) const;
  double max_reach() const;
  bool reaches(Vec3 point) const;
};

enum class PatchPhase : std::uint8_t { kUnburned, kIgniting, kBurning };

struct PatchState {
  PatchPhase phase = PatchPhase::kUnburned;
  double time = 0.0;  // ignition deadline while igniting, burn start once burning
};

class SpreadState {
 public:
  // Throws kUnknownMaterial when a collidable surface has no profile and
  // kOutOfBounds for an ignition outside the scene bounds.
  SpreadState(SceneHandle scene, std::vector<MaterialProfile> materials,
              std::vector<Ignition> ignitions, Environment env, SpreadConfig config = {});

  void step(double dt);
  void advance_to(double horizon, double dt);
  void set_environment(const Environment& env);  // validates
  // Adds a new ignition, e.g. from a live detection. Throws kOutOfBounds.
  void ignite(Ignition ignition);

  double sim_time() const { return sim_time_; }
  const Environment& environment() const { return env_; }
  const SpreadConfig& config() const { return config_; }
  const std::vector<FlameSource>& sources() const { return sources_; }
  const std::vector<PatchState>& patch_states() const { return patches_; }
  const TessellatedScene& scene() const { return *scene_; }
  const SceneHandle& scene_handle() const { return scene_; }
  const MaterialProfile& material(const std::string& tag) const;
  double burning_area() const { return burning_area_; }
  const std::vector<std::pair<double, double>>& burning_area_series() const { return series_; }

  // Burn start of a patch, absent if it has not burned. Throws kUnknownPatch.
  std::optional<double> arrival_time(PatchId patch) const;
  // patch id -> burn start, for every burning patch.
  std::map<PatchId, double> arrival_map() const;

  // FNV-1a over the full simulation state.
  std::uint64_t hash() const;

 private:
  // Flammable patches that have not been reached yet, bucketed by cell.
  struct UnburnedGrid {
    Vec3 origin;
    double cell = 1.0;
    std::array<int, 3> dims{1, 1, 1};
    std::vector<std::vector<PatchId>> cells;
    std::vector<std::uint32_t> occupied;  // may list cells that emptied since
    std::size_t count = 0;

    std::array<int, 3> cell_of(Vec3 p) const;
    std::uint32_t linear(int i, int j, int k) const {
      return static_cast<std::uint32_t>((i * dims[1] + j) * dims[2] + k);
    }
  };

  std::uint32_t spawn(Vec3 center, double ignite_time, double base_speed);
  void grow(FlameSource& source, double from, double to) const;
  void build_unburned();
  void remove_unburned(PatchId id);
  void reach_from(const FlameSource& source, double t1, std::vector<PatchId>& reached);

  SceneHandle scene_;
  std::map<std::string, MaterialProfile> materials_;
  Environment env_;
  SpreadConfig config_;
  double sim_time_ = 0.0;
  std::vector<FlameSource> sources_;
  std::vector<PatchState> patches_;
  // Ignition patches waiting for their ignite time.
  std::vector<std::pair<PatchId, double>> pending_;
  std::set<PatchId> igniting_;
  UnburnedGrid unburned_;
  double burning_area_ = 0.0;
  std::vector<std::pair<double, double>> series_;
};

// Free-function forms of the state operations.
SpreadState init_spread(SceneHandle scene, std::vector<MaterialProfile> materials,
                        std::vector<Ignition> ignitions, Environment env,
                        SpreadConfig config = {});
SpreadState step(SpreadState state, double dt);
SpreadState set_environment(SpreadState state, const Environment& env);
std::optional<double> arrival_time(const SpreadState& state, PatchId patch);
std::vector<std::pair<double, double>> growth_series(const SpreadState& state);

}  // namespace ivsr
