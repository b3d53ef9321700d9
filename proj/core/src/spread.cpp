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

#include "ivsr/spread.hpp"

#include <algorithm>
#include <bit>
#include <numbers>

#include "ivsr/error.hpp"

namespace ivsr {
namespace {

constexpr double kTimeEps = 1e-9;

class Fnv {
 public:
  void add(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h_ ^= (v >> (8 * i)) & 0xFF;
      h_ *= 1099511628211ull;
    }
  }
  void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
  void add(Vec3 v) {
    add(v.x);
    add(v.y);
    add(v.z);
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 1469598103934665603ull;
};

}  // namespace

void MaterialProfile::validate() const {
  if (tag.empty()) throw Error(ErrorCode::kInvalidArgument, "material with empty tag");
  if (std::isnan(ignition_delay) || ignition_delay < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "material '" + tag + "': ignition_delay < 0");
  }
  if (!(expansion_speed > 0.0) || !std::isfinite(expansion_speed)) {
    throw Error(ErrorCode::kInvalidArgument, "material '" + tag + "': expansion_speed <= 0");
  }
}

std::vector<MaterialProfile> default_materials() {
  return {
      {"dry-vegetation", 2.0, 0.5},
      {"wood", 8.0, 0.2},
      {"concrete", std::numeric_limits<double>::infinity(), 0.1},
  };
}

void Environment::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (!std::isfinite(air_temp)) fail("air_temp must be finite");
  if (!(humidity >= 0.0 && humidity <= 100.0)) fail("humidity must lie in [0, 100]");
  if (!(wind_speed >= 0.0) || !std::isfinite(wind_speed)) fail("wind_speed must be >= 0");
  if (!(wind_direction >= 0.0 && wind_direction < 360.0)) {
    fail("wind_direction must lie in [0, 360)");
  }
}

Vec3 wind_vector(double direction_deg) {
  const double a = direction_deg * std::numbers::pi / 180.0;
  return {std::sin(a), std::cos(a), 0.0};
}

double humidity_multiplier(const Environment& env, const SpreadConfig& config) {
  return std::clamp(1.5 - env.humidity / 100.0, config.humidity_min_multiplier,
                    config.humidity_max_multiplier);
}

double effective_speed(double base_speed, const Environment& env, const SpreadConfig& config,
                       Vec3 direction) {
  const double along = std::max(0.0, dot(direction, wind_vector(env.wind_direction)));
  return base_speed * humidity_multiplier(env, config) *
         (1.0 + config.wind_coefficient * env.wind_speed * along);
}

double FlameSource::reach(Vec3 direction) const {
  double r = isotropic;
  for (const auto& [w, coeff] : wind_terms) r += coeff * std::max(0.0, dot(direction, w));
  return r;
}

double FlameSource::max_reach() const {
  double r = isotropic;
  for (const auto& term : wind_terms) r += term.second;
  return r;
}

bool FlameSource::reaches(Vec3 point) const {
  const Vec3 d = point - center;
  const double dist = norm(d);
  if (dist == 0.0) return true;
  if (dist > max_reach()) return false;
  return dist <= reach(d / dist);
}

SpreadState::SpreadState(SceneHandle scene, std::vector<MaterialProfile> materials,
                         std::vector<Ignition> ignitions, Environment env, SpreadConfig config)
    : scene_(std::move(scene)), env_(env), config_(config) {
  if (!scene_) throw Error(ErrorCode::kInvalidArgument, "spread needs a scene");
  env_.validate();
  if (!(config_.dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
  for (auto& m : materials) {
    m.validate();
    materials_[m.tag] = m;
  }
  for (const Surface& s : scene_->scene().surfaces()) {
    if (s.collidable && !materials_.count(s.material_tag)) {
      throw Error(ErrorCode::kUnknownMaterial,
                  "surface '" + s.id + "' uses material '" + s.material_tag + "'");
    }
  }
  patches_.assign(scene_->patches().size(), PatchState{});
  build_unburned();
  double start = 0.0;
  if (!ignitions.empty()) {
    start = std::min_element(ignitions.begin(), ignitions.end(), [](auto& a, auto& b) {
              return a.time < b.time;
            })->time;
  }
  sim_time_ = start;
  for (const Ignition& ig : ignitions) ignite(ig);
}

const MaterialProfile& SpreadState::material(const std::string& tag) const {
  auto it = materials_.find(tag);
  if (it == materials_.end()) throw Error(ErrorCode::kUnknownMaterial, "material '" + tag + "'");
  return it->second;
}

std::uint32_t SpreadState::spawn(Vec3 center, double ignite_time, double base_speed) {
  FlameSource s;
  s.id = static_cast<std::uint32_t>(sources_.size());
  s.center = center;
  s.ignite_time = ignite_time;
  s.base_speed = base_speed;
  sources_.push_back(std::move(s));
  return sources_.back().id;
}

void SpreadState::ignite(Ignition ignition) {
  if (!is_finite(ignition.point) || !std::isfinite(ignition.time)) {
    throw Error(ErrorCode::kInvalidArgument, "non-finite ignition");
  }
  if (!scene_->scene().bounds().contains(ignition.point)) {
    throw Error(ErrorCode::kOutOfBounds, "ignition outside scene bounds");
  }
  const double t = std::max(ignition.time, sim_time_);
  auto patch = scene_->nearest_patch(ignition.point);
  const double speed =
      patch ? material(scene_->patch(*patch).material_tag).expansion_speed
            : default_materials().front().expansion_speed;
  const std::uint32_t id = spawn(ignition.point, t, speed);
  // A source igniting mid-step is grown to the current time right away.
  if (t < sim_time_) grow(sources_[id], t, sim_time_);
  if (patch) pending_.emplace_back(*patch, t);
}

void SpreadState::grow(FlameSource& source, double from, double to) const {
  const double start = std::max(from, source.ignite_time);
  const double span = to - start;
  if (!(span > 0.0)) return;
  const double base = source.base_speed * humidity_multiplier(env_, config_) * span;
  source.isotropic += base;
  if (env_.wind_speed > 0.0) {
    const Vec3 w = wind_vector(env_.wind_direction);
    const double coeff = base * config_.wind_coefficient * env_.wind_speed;
    if (!source.wind_terms.empty() && source.wind_terms.back().first == w) {
      source.wind_terms.back().second += coeff;
    } else {
      source.wind_terms.emplace_back(w, coeff);
    }
  }
}

std::array<int, 3> SpreadState::UnburnedGrid::cell_of(Vec3 p) const {
  const Vec3 r = (p - origin) / cell;
  auto clampi = [](double x, int n) { return std::clamp(static_cast<int>(std::floor(x)), 0, n - 1); };
  return {clampi(r.x, dims[0]), clampi(r.y, dims[1]), clampi(r.z, dims[2])};
}

void SpreadState::build_unburned() {
  const Aabb& b = scene_->scene().bounds();
  UnburnedGrid& g = unburned_;
  g.origin = b.min;
  g.cell = std::max(4.0 * scene_->patch_size(), b.diagonal() / 64.0);
  const Vec3 e = b.extent();
  g.dims = {std::max(1, static_cast<int>(std::ceil(e.x / g.cell))),
            std::max(1, static_cast<int>(std::ceil(e.y / g.cell))),
            std::max(1, static_cast<int>(std::ceil(e.z / g.cell)))};
  g.cells.assign(static_cast<std::size_t>(g.dims[0]) * g.dims[1] * g.dims[2], {});
  g.occupied.clear();
  g.count = 0;
  for (const Patch& p : scene_->patches()) {
    if (!material(p.material_tag).flammable()) continue;
    const auto c = g.cell_of(p.centroid);
    auto& bucket = g.cells[g.linear(c[0], c[1], c[2])];
    if (bucket.empty()) g.occupied.push_back(g.linear(c[0], c[1], c[2]));
    bucket.push_back(p.id);
    ++g.count;
  }
}

void SpreadState::remove_unburned(PatchId id) {
  const auto c = unburned_.cell_of(scene_->patch(id).centroid);
  auto& bucket = unburned_.cells[unburned_.linear(c[0], c[1], c[2])];
  auto it = std::find(bucket.begin(), bucket.end(), id);
  if (it == bucket.end()) return;
  bucket.erase(it);
  --unburned_.count;
}

void SpreadState::reach_from(const FlameSource& source, double t1, std::vector<PatchId>& reached) {
  const UnburnedGrid& g = unburned_;
  const double r = source.max_reach();
  const Vec3 ext{r, r, r};
  const auto lo = g.cell_of(source.center - ext);
  const auto hi = g.cell_of(source.center + ext);
  const auto& table = scene_->patches();
  auto scan = [&](const std::vector<PatchId>& bucket) {
    for (PatchId id : bucket) {
      PatchState& ps = patches_[id];
      if (ps.phase != PatchPhase::kUnburned || !source.reaches(table[id].centroid)) continue;
      ps = {PatchPhase::kIgniting, t1 + material(table[id].material_tag).ignition_delay};
      reached.push_back(id);
    }
  };
  const std::size_t span = static_cast<std::size_t>(hi[0] - lo[0] + 1) * (hi[1] - lo[1] + 1) *
                           (hi[2] - lo[2] + 1);
  if (span > g.occupied.size()) {
    for (std::uint32_t c : g.occupied) {
      const int k = static_cast<int>(c % g.dims[2]);
      const int j = static_cast<int>((c / g.dims[2]) % g.dims[1]);
      const int i = static_cast<int>(c / g.dims[2] / g.dims[1]);
      if (i < lo[0] || i > hi[0] || j < lo[1] || j > hi[1] || k < lo[2] || k > hi[2]) continue;
      scan(g.cells[c]);
    }
    return;
  }
  for (int i = lo[0]; i <= hi[0]; ++i) {
    for (int j = lo[1]; j <= hi[1]; ++j) {
      for (int k = lo[2]; k <= hi[2]; ++k) scan(g.cells[g.linear(i, j, k)]);
    }
  }
}

void SpreadState::step(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::kInvalidArgument, "step needs dt > 0");
  }
  const double t0 = sim_time_;
  const double t1 = t0 + dt;
  const auto& table = scene_->patches();

  for (FlameSource& s : sources_) grow(s, t0, t1);

  // Scheduled ignitions whose time has come.
  std::vector<std::pair<PatchId, double>> later;
  std::sort(pending_.begin(), pending_.end());
  for (const auto& [id, when] : pending_) {
    if (when > t1 + kTimeEps) {
      later.emplace_back(id, when);
    } else if (patches_[id].phase != PatchPhase::kBurning) {
      if (patches_[id].phase == PatchPhase::kUnburned) remove_unburned(id);
      igniting_.erase(id);
      patches_[id] = {PatchPhase::kBurning, when};
      burning_area_ += table[id].area;
    }
  }
  pending_ = std::move(later);

  // Reach test against sources alive at t1. Sources spawned below join in
  // the next step.
  if (unburned_.count > 0) {
    auto& occ = unburned_.occupied;
    std::erase_if(occ, [&](std::uint32_t c) { return unburned_.cells[c].empty(); });
    std::vector<PatchId> reached;
    const std::size_t active = sources_.size();
    for (std::size_t k = 0; k < active && unburned_.count > reached.size(); ++k) {
      if (sources_[k].ignite_time <= t1) reach_from(sources_[k], t1, reached);
    }
    for (PatchId id : reached) {
      remove_unburned(id);
      igniting_.insert(id);
    }
  }

  for (auto it = igniting_.begin(); it != igniting_.end();) {
    const PatchId id = *it;
    PatchState& ps = patches_[id];
    if (ps.time > t1 + kTimeEps) {
      ++it;
      continue;
    }
    ps.phase = PatchPhase::kBurning;
    burning_area_ += table[id].area;
    const MaterialProfile& m = material(table[id].material_tag);
    const std::uint32_t sid = spawn(table[id].centroid, ps.time, m.expansion_speed);
    grow(sources_[sid], ps.time, t1);
    it = igniting_.erase(it);
  }

  sim_time_ = t1;
  series_.emplace_back(t1, burning_area_);
}

void SpreadState::advance_to(double horizon, double dt) {
  while (sim_time_ + kTimeEps < horizon) step(std::min(dt, horizon - sim_time_));
}

void SpreadState::set_environment(const Environment& env) {
  env.validate();
  env_ = env;
}

std::optional<double> SpreadState::arrival_time(PatchId patch) const {
  if (patch >= patches_.size()) {
    throw Error(ErrorCode::kUnknownPatch, "patch " + std::to_string(patch));
  }
  const PatchState& ps = patches_[patch];
  if (ps.phase != PatchPhase::kBurning) return std::nullopt;
  return ps.time;
}

std::map<PatchId, double> SpreadState::arrival_map() const {
  std::map<PatchId, double> out;
  for (PatchId id = 0; id < patches_.size(); ++id) {
    if (patches_[id].phase == PatchPhase::kBurning) out.emplace(id, patches_[id].time);
  }
  return out;
}

std::uint64_t SpreadState::hash() const {
  Fnv h;
  h.add(sim_time_);
  h.add(env_.air_temp);
  h.add(env_.humidity);
  h.add(env_.wind_speed);
  h.add(env_.wind_direction);
  for (const PatchState& p : patches_) {
    h.add(static_cast<std::uint64_t>(p.phase));
    h.add(p.time);
  }
  for (const FlameSource& s : sources_) {
    h.add(s.center);
    h.add(s.ignite_time);
    h.add(s.base_speed);
    h.add(s.isotropic);
    for (const auto& [w, c] : s.wind_terms) {
      h.add(w);
      h.add(c);
    }
  }
  for (const auto& [t, a] : series_) {
    h.add(t);
    h.add(a);
  }
  return h.value();
}

SpreadState init_spread(SceneHandle scene, std::vector<MaterialProfile> materials,
                        std::vector<Ignition> ignitions, Environment env, SpreadConfig config) {
  return SpreadState(std::move(scene), std::move(materials), std::move(ignitions), env, config);
}

SpreadState step(SpreadState state, double dt) {
  state.step(dt);
  return state;
}

SpreadState set_environment(SpreadState state, const Environment& env) {
  state.set_environment(env);
  return state;
}

std::optional<double> arrival_time(const SpreadState& state, PatchId patch) {
  return state.arrival_time(patch);
}

std::vector<std::pair<double, double>> growth_series(const SpreadState& state) {
  return state.burning_area_series();
}

}  // namespace ivsr
