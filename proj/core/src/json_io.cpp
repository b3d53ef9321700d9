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

#include "ivsr/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace ivsr {

void to_json(json& j, const Vec3& v) { j = json::array({v.x, v.y, v.z}); }
void from_json(const json& j, Vec3& v) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorCode::kSchemaError, "a point must be an array of three numbers");
  }
  v = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void to_json(json& j, const Aabb& b) { j = {{"min", b.min}, {"max", b.max}}; }
void from_json(const json& j, Aabb& b) {
  b.min = j.at("min").get<Vec3>();
  b.max = j.at("max").get<Vec3>();
}

void to_json(json& j, const Triangle& t) { j = json::array({t.a, t.b, t.c}); }
void from_json(const json& j, Triangle& t) {
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorCode::kSchemaError, "a triangle must be an array of three points");
  }
  t = {j[0].get<Vec3>(), j[1].get<Vec3>(), j[2].get<Vec3>()};
}

void to_json(json& j, const Surface& s) {
  j = {{"id", s.id},
       {"kind", to_string(s.kind)},
       {"material_tag", s.material_tag},
       {"collidable", s.collidable},
       {"occluder", s.occluder},
       {"triangles", s.triangles}};
}
void from_json(const json& j, Surface& s) {
  s.id = j.at("id").get<std::string>();
  s.kind = surface_kind_from_string(j.value("kind", std::string("wall")));
  s.material_tag = j.value("material_tag", std::string("concrete"));
  s.collidable = j.value("collidable", default_collidable(s.kind));
  s.occluder = j.value("occluder", false);
  s.triangles = j.at("triangles").get<std::vector<Triangle>>();
}

void to_json(json& j, const Timestamp& t) { j = t.to_string(); }
void from_json(const json& j, Timestamp& t) {
  const std::string text = j.get<std::string>();
  auto parsed = Timestamp::parse_loose(text);
  if (!parsed) throw Error(ErrorCode::kSchemaError, "bad timestamp \"" + text + "\"");
  t = *parsed;
}

void to_json(json& j, const CameraPose& c) {
  j = {{"id", c.id},
       {"sensor_id", c.sensor_id},
       {"position", c.position},
       {"yaw", c.yaw},
       {"pitch", c.pitch},
       {"roll", c.roll},
       {"h_fov", c.h_fov},
       {"v_fov", c.v_fov},
       {"pixel_cols", c.pixel_cols},
       {"pixel_rows", c.pixel_rows}};
}
void from_json(const json& j, CameraPose& c) {
  CameraPose d;
  c.id = j.value("id", std::string());
  c.sensor_id = j.value("sensor_id", std::string());
  c.position = j.at("position").get<Vec3>();
  c.yaw = j.value("yaw", d.yaw);
  c.pitch = j.value("pitch", d.pitch);
  c.roll = j.value("roll", d.roll);
  c.h_fov = j.value("h_fov", d.h_fov);
  c.v_fov = j.value("v_fov", d.v_fov);
  c.pixel_cols = j.value("pixel_cols", d.pixel_cols);
  c.pixel_rows = j.value("pixel_rows", d.pixel_rows);
}

void to_json(json& j, const Hit& h) {
  j = {{"point", h.point}, {"surface_id", h.surface_id}, {"distance", h.distance}};
  if (h.patch_id) j["patch_id"] = *h.patch_id;
}

void to_json(json& j, const CoverageReport& r) {
  j = {{"s0", r.s0},
       {"s1", r.s1},
       {"p1", r.p1},
       {"overlap_area", r.overlap_area},
       {"covered_patch_ids", r.covered_patch_ids},
       {"hit_points", r.hit_points}};
}

void to_json(json& j, const PlacementResult& r) {
  j = {{"chosen_indices", r.chosen_indices},
       {"chosen", r.chosen},
       {"marginal_gains", r.marginal_gains},
       {"union_s1", r.union_s1},
       {"overlap_area", r.overlap_area}};
}

void to_json(json& j, const FireEvent& e) {
  j = {{"id", e.id},
       {"position", e.position},
       {"surface_id", e.surface_id},
       {"threat_level", e.threat_level},
       {"peak_temp", e.peak_temp},
       {"pixel_count", e.pixel_count},
       {"timestamp", e.timestamp},
       {"sensor_id", e.sensor_id}};
}
void from_json(const json& j, FireEvent& e) {
  e.id = j.value("id", FireEventId{0});
  e.position = j.at("position").get<Vec3>();
  e.surface_id = j.value("surface_id", std::string());
  e.threat_level = j.value("threat_level", std::string());
  e.peak_temp = j.value("peak_temp", 0.0);
  e.pixel_count = j.value("pixel_count", std::int64_t{0});
  e.timestamp = j.at("timestamp").get<Timestamp>();
  e.sensor_id = j.value("sensor_id", std::string());
}

void to_json(json& j, const ReplayEvent& e) {
  j = {{"source_record_id", e.source_record_id},
       {"fire_event", e.fire_event},
       {"lifetime", e.lifetime}};
}

void to_json(json& j, const MaterialProfile& m) {
  j = {{"tag", m.tag}, {"expansion_speed_mps", m.expansion_speed}};
  if (m.flammable()) {
    j["ignition_delay_s"] = m.ignition_delay;
  } else {
    j["ignition_delay_s"] = nullptr;
  }
}
void from_json(const json& j, MaterialProfile& m) {
  m.tag = j.at("tag").get<std::string>();
  const json& delay = j.at("ignition_delay_s");
  if (delay.is_null() || (delay.is_string() && (delay == "inf" || delay == "infinity"))) {
    m.ignition_delay = std::numeric_limits<double>::infinity();
  } else {
    m.ignition_delay = delay.get<double>();
  }
  m.expansion_speed = j.at("expansion_speed_mps").get<double>();
}

void to_json(json& j, const Environment& e) {
  j = {{"air_temp", e.air_temp},
       {"humidity", e.humidity},
       {"wind_speed", e.wind_speed},
       {"wind_direction", e.wind_direction}};
}
void from_json(const json& j, Environment& e) {
  Environment d;
  e.air_temp = j.value("air_temp", d.air_temp);
  e.humidity = j.value("humidity", d.humidity);
  e.wind_speed = j.value("wind_speed", d.wind_speed);
  e.wind_direction = j.value("wind_direction", d.wind_direction);
}

void to_json(json& j, const Resource& r) {
  j = {{"kind", to_string(r.kind)},
       {"count", r.count},
       {"position", r.position},
       {"available", r.available}};
}
void from_json(const json& j, Resource& r) {
  r.kind = resource_kind_from_string(j.at("kind").get<std::string>());
  r.count = j.at("count").get<std::int64_t>();
  r.position = j.value("position", Vec3{});
  r.available = j.value("available", r.count);
}

namespace {

json objects_to_json(const PathObjects& objects) {
  json out = json::array();
  for (PathObject o : objects) out.push_back(to_string(o));
  return out;
}

PathObjects objects_from_json(const json& j) {
  PathObjects out;
  for (const json& o : j) out.insert(path_object_from_string(o.get<std::string>()));
  return out;
}

}  // namespace

void to_json(json& j, const StatusLog& s) {
  j = {{"fire_events", s.fire_events},
       {"env", s.env},
       {"resources", s.resources},
       {"alert_level", to_string(s.alert_level)},
       {"objects_in_path", objects_to_json(s.objects_in_path)}};
  if (s.material_class) j["material_class"] = to_string(*s.material_class);
  if (s.spread_rate) j["spread_rate"] = *s.spread_rate;
  if (s.spread) {
    j["sim_time"] = s.spread->sim_time();
    j["burning_area"] = s.spread->burning_area();
    j["burning_patches"] = s.spread->arrival_map().size();
    j["flame_sources"] = s.spread->sources().size();
  }
}

void to_json(json& j, const FeatureVector& f) {
  j = {{"severity", to_string(f.severity)},
       {"responders", f.responders},
       {"fire_trucks", f.fire_trucks},
       {"helicopters", f.helicopters},
       {"ambulances", f.ambulances},
       {"material_class", to_string(f.material_class)},
       {"wind_speed", f.wind_speed},
       {"wind_direction", f.wind_direction},
       {"spread_rate", f.spread_rate},
       {"max_temp", f.max_temp},
       {"objects_in_path", objects_to_json(f.objects_in_path)}};
}
void from_json(const json& j, FeatureVector& f) {
  f.severity = severity_from_string(j.value("severity", std::string("low")));
  f.responders = j.value("responders", std::int64_t{0});
  f.fire_trucks = j.value("fire_trucks", std::int64_t{0});
  f.helicopters = j.value("helicopters", std::int64_t{0});
  f.ambulances = j.value("ambulances", std::int64_t{0});
  f.material_class =
      material_class_from_string(j.value("material_class", std::string("forest_dry_vegetation")));
  f.wind_speed = j.value("wind_speed", 0.0);
  f.wind_direction = j.value("wind_direction", 0.0);
  f.spread_rate = j.value("spread_rate", 0.0);
  f.max_temp = j.value("max_temp", 0.0);
  f.objects_in_path = objects_from_json(j.value("objects_in_path", json::array()));
}

void to_json(json& j, const Action& a) {
  j = {{"kind", to_string(a.kind)}, {"quantity", a.quantity}};
  if (const auto* p = std::get_if<Vec3>(&a.target)) {
    j["target"] = *p;
  } else {
    j["target"] = std::get<std::string>(a.target);
  }
}
void from_json(const json& j, Action& a) {
  a.kind = action_kind_from_string(j.at("kind").get<std::string>());
  const json& t = j.at("target");
  if (t.is_string()) {
    a.target = t.get<std::string>();
  } else {
    a.target = t.get<Vec3>();
  }
  a.quantity = j.value("quantity", std::int64_t{1});
}

void to_json(json& j, const InterventionPlan& p) {
  j = {{"id", p.id},
       {"actions", p.actions},
       {"effectiveness", p.effectiveness},
       {"cost_efficiency", p.cost_efficiency},
       {"response_speed", p.response_speed}};
}
void from_json(const json& j, InterventionPlan& p) {
  p.id = j.at("id").get<std::string>();
  p.actions = j.at("actions").get<std::vector<Action>>();
  p.effectiveness = j.at("effectiveness").get<double>();
  p.cost_efficiency = j.at("cost_efficiency").get<double>();
  p.response_speed = j.at("response_speed").get<double>();
}

void to_json(json& j, const ScenarioRecord& r) {
  j = {{"id", r.id}, {"features", r.features}, {"growth", r.growth}, {"plans", r.plans}};
}
void from_json(const json& j, ScenarioRecord& r) {
  r.id = j.at("id").get<std::string>();
  r.features = j.at("features").get<FeatureVector>();
  r.growth = j.at("growth").get<std::vector<double>>();
  r.plans = j.at("plans").get<std::vector<InterventionPlan>>();
}

void to_json(json& j, const ScenarioGrid& g) {
  j = {{"wind_speeds", g.wind_speeds},
       {"wind_direction", g.wind_direction},
       {"humidities", g.humidities},
       {"materials", g.materials},
       {"ignition_sites", g.ignition_sites},
       {"air_temp", g.air_temp},
       {"horizon_s", g.horizon},
       {"dt", g.dt},
       {"patch_size", g.patch_size},
       {"base", g.base}};
}
void from_json(const json& j, ScenarioGrid& g) {
  ScenarioGrid d;
  g.wind_speeds = j.at("wind_speeds").get<std::vector<double>>();
  g.wind_direction = j.value("wind_direction", d.wind_direction);
  g.humidities = j.at("humidities").get<std::vector<double>>();
  g.materials = j.at("materials").get<std::vector<std::string>>();
  g.ignition_sites = j.at("ignition_sites").get<std::vector<Vec3>>();
  g.air_temp = j.value("air_temp", d.air_temp);
  g.horizon = j.value("horizon_s", d.horizon);
  g.dt = j.value("dt", d.dt);
  g.patch_size = j.value("patch_size", d.patch_size);
  if (j.contains("base")) g.base = j.at("base").get<FeatureVector>();
}

void to_json(json& j, const MatchResult& m) {
  j = {{"scenario_id", m.scenario_id},
       {"static_distance", m.static_distance},
       {"temporal_distance", m.temporal_distance},
       {"combined", m.combined}};
}

void to_json(json& j, const RoutePlan& r) {
  j = {{"waypoints", r.waypoints}, {"total_length", r.total_length}, {"clearance", r.clearance}};
}
void from_json(const json& j, RoutePlan& r) {
  r.waypoints = j.at("waypoints").get<std::vector<Vec3>>();
  r.total_length = j.at("total_length").get<double>();
  r.clearance = j.at("clearance").get<double>();
}

void to_json(json& j, const Decision& d) {
  j = {{"approver_id", d.approver_id},
       {"verdict", to_string(d.verdict)},
       {"timestamp", d.timestamp}};
  if (d.modified_plan) j["modified_plan"] = *d.modified_plan;
}
void from_json(const json& j, Decision& d) {
  d.approver_id = j.at("approver_id").get<std::string>();
  d.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  if (j.contains("modified_plan") && !j.at("modified_plan").is_null()) {
    d.modified_plan = j.at("modified_plan").get<InterventionPlan>();
  } else {
    d.modified_plan.reset();
  }
  if (j.contains("timestamp")) d.timestamp = j.at("timestamp").get<Timestamp>();
}

void to_json(json& j, const Outcome& o) {
  j = {{"success", o.success}, {"note", o.note}, {"timestamp", o.timestamp}};
}
void from_json(const json& j, Outcome& o) {
  o.success = j.at("success").get<bool>();
  o.note = j.value("note", std::string());
  o.timestamp = j.at("timestamp").get<Timestamp>();
}

void to_json(json& j, const DispatchRecord& d) {
  j = {{"timestamp", d.timestamp}, {"actions", d.actions}, {"routes", d.routes}};
}
void from_json(const json& j, DispatchRecord& d) {
  d.timestamp = j.at("timestamp").get<Timestamp>();
  d.actions = j.at("actions").get<std::vector<Action>>();
  d.routes = j.at("routes").get<std::vector<RoutePlan>>();
}

void to_json(json& j, const CommandTicket& t) {
  j = {{"id", t.id},
       {"plan", t.plan},
       {"scenario_id", t.scenario_id},
       {"state", to_string(t.state)},
       {"decisions", t.decisions}};
  j["dispatch"] = t.dispatch ? json(*t.dispatch) : json(nullptr);
  j["outcome"] = t.outcome ? json(*t.outcome) : json(nullptr);
}

void to_json(json& j, const LedgerEntry& e) {
  j = {{"scenario_id", e.scenario_id},
       {"plan_id", e.plan_id},
       {"verdict", to_string(e.verdict)},
       {"timestamp", e.timestamp},
       {"delta", e.delta}};
}

void to_json(json& j, const Recommendation& r) {
  j = {{"scenario_id", r.scenario_id},
       {"plan", r.plan},
       {"base_score", r.base_score},
       {"penalty", r.penalty},
       {"score", r.score}};
}

void to_json(json& j, const TicketEvent& e) {
  j = {{"seq", e.seq}, {"ticket", e.ticket}, {"type", e.type}, {"body", e.body}};
}
void from_json(const json& j, TicketEvent& e) {
  e.seq = j.at("seq").get<std::uint64_t>();
  e.ticket = j.at("ticket").get<TicketId>();
  e.type = j.at("type").get<std::string>();
  e.body = j.value("body", json::object());
}

Scene scene_from_json(const json& j) {
  try {
    if (j.contains("room")) {
      const json& r = j.at("room");
      std::optional<std::string> floor;
      if (r.contains("floor_material")) floor = r.at("floor_material").get<std::string>();
      return make_room(r.at("width").get<double>(), r.at("depth").get<double>(),
                       r.at("height").get<double>(), r.value("material", std::string("concrete")),
                       floor);
    }
    return Scene(j.at("surfaces").get<std::vector<Surface>>(), j.at("bounds").get<Aabb>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string("scene: ") + e.what());
  }
}

json scene_to_json(const Scene& scene) {
  return {{"bounds", scene.bounds()}, {"surfaces", scene.surfaces()}};
}

SensorRegistry sensors_from_json(const json& j) {
  SensorRegistry reg;
  const auto cameras = from_document<std::vector<CameraPose>>(j.at("cameras"), "sensors");
  for (const CameraPose& c : cameras) reg.bind(c);
  if (j.contains("default")) reg.set_default(j.at("default").get<std::string>());
  return reg;
}

json sensors_to_json(const SensorRegistry& sensors) {
  json cams = json::array();
  for (const auto& [id, cam] : sensors.cameras()) cams.push_back(cam);
  return {{"default", sensors.default_sensor()}, {"cameras", cams}};
}

json spread_summary(const SpreadState& state) {
  json arrivals = json::array();
  for (const auto& [patch, t] : state.arrival_map()) {
    const Patch& p = state.scene().patch(patch);
    arrivals.push_back({{"patch_id", patch},
                        {"surface_id", p.surface_id},
                        {"centroid", p.centroid},
                        {"arrival_time", t}});
  }
  json series = json::array();
  for (const auto& [t, a] : state.burning_area_series()) series.push_back({t, a});
  return {{"sim_time", state.sim_time()},
          {"environment", state.environment()},
          {"burning_area", state.burning_area()},
          {"arrival_map", arrivals},
          {"growth_series", series},
          {"hash", state.hash()}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kStorageError, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kStorageError, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kStorageError, "write to " + path.string() + " failed");
}

}  // namespace ivsr
