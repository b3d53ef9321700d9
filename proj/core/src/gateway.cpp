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

#include "ivsr/gateway.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "ivsr/error.hpp"
#include "ivsr/json_io.hpp"

namespace ivsr {
namespace {

Timestamp wall_now() {
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  return Timestamp{std::chrono::duration_cast<std::chrono::microseconds>(now).count()};
}

HttpResponse error_response(int status, const std::string& code, const std::string& message) {
  return {status, {{"error", code}, {"message", message}}};
}

HttpResponse error_response(const Error& e) {
  return error_response(http_status(e.code()), std::string(to_string(e.code())), e.what());
}

std::string url_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '+') {
      out += ' ';
    } else if (s[i] == '%' && i + 2 < s.size()) {
      int v = 0;
      auto r = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
      if (r.ec == std::errc{} && r.ptr == s.data() + i + 3) {
        out += static_cast<char>(v);
        i += 2;
      } else {
        out += s[i];
      }
    } else {
      out += s[i];
    }
  }
  return out;
}

std::map<std::string, std::string> parse_query(std::string_view q) {
  std::map<std::string, std::string> out;
  while (!q.empty()) {
    const auto amp = q.find('&');
    const std::string_view pair = q.substr(0, amp);
    const auto eq = pair.find('=');
    if (!pair.empty()) {
      out[url_decode(pair.substr(0, eq))] =
          eq == std::string_view::npos ? std::string() : url_decode(pair.substr(eq + 1));
    }
    if (amp == std::string_view::npos) break;
    q.remove_prefix(amp + 1);
  }
  return out;
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  while (!path.empty()) {
    const auto slash = path.find('/');
    if (slash != 0) parts.push_back(url_decode(path.substr(0, slash)));
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash + 1);
  }
  return parts;
}

std::optional<std::uint64_t> parse_id(const std::string& s) {
  std::uint64_t v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

std::string_view state_after(const TicketEvent& ev) {
  if (ev.type == "proposed") return to_string(TicketState::kProposed);
  if (ev.type == "review") return to_string(TicketState::kPendingApproval);
  if (ev.type == "dispatched") return to_string(TicketState::kDispatched);
  if (ev.type == "outcome") {
    return to_string(ev.body.value("success", false) ? TicketState::kExecuted : TicketState::kFailed);
  }
  if (ev.body.contains("state")) return ev.body["state"].get_ref<const std::string&>();
  return "";
}

std::uint64_t fnv(std::string_view s, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json record_document(RecordId id, const DetectionRecord& r) {
  return {{"record_id", id}, {"record", json::parse(serialize_detection(r))}};
}

}  // namespace

json StreamEvent::to_json() const {
  return {{"seq", seq}, {"kind", kind}, {"sim_time", sim_time}, {"payload", payload}};
}

std::optional<StreamEvent> StreamSubscriber::next(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  ready_.wait_for(lock, timeout, [&] { return !queue_.empty() || closed_; });
  if (queue_.empty()) return std::nullopt;
  StreamEvent ev = std::move(queue_.front());
  queue_.pop_front();
  return ev;
}

bool StreamSubscriber::closed() const {
  std::lock_guard lock(mutex_);
  return closed_;
}

bool StreamSubscriber::overflowed() const {
  std::lock_guard lock(mutex_);
  return overflowed_;
}

void StreamSubscriber::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  ready_.notify_all();
}

bool StreamSubscriber::push(StreamEvent event) {
  {
    std::lock_guard lock(mutex_);
    if (closed_) return false;
    if (queue_.size() >= capacity_) {
      overflowed_ = true;
      closed_ = true;
      queue_.clear();
    } else {
      event.seq = next_seq_++;
      queue_.push_back(std::move(event));
    }
  }
  ready_.notify_all();
  return !overflowed_;
}

std::shared_ptr<StreamSubscriber> StreamHub::subscribe() {
  auto sub = std::make_shared<StreamSubscriber>(capacity_);
  std::lock_guard lock(mutex_);
  subs_.push_back(sub);
  return sub;
}

void StreamHub::unsubscribe(const std::shared_ptr<StreamSubscriber>& sub) {
  std::lock_guard lock(mutex_);
  std::erase(subs_, sub);
}

void StreamHub::publish(const std::string& kind, const json& payload, double sim_time) {
  std::lock_guard lock(mutex_);
  std::erase_if(subs_, [&](const std::shared_ptr<StreamSubscriber>& sub) {
    return !sub->push(StreamEvent{0, kind, payload, sim_time});
  });
}

std::size_t StreamHub::subscribers() const {
  std::lock_guard lock(mutex_);
  return subs_.size();
}

void StreamHub::close_all() {
  std::lock_guard lock(mutex_);
  for (auto& sub : subs_) sub->close();
  subs_.clear();
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kSchemaError:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kMissingModifiedPlan:
    case ErrorCode::kBadWeights:
    case ErrorCode::kOutOfBounds:
      return 400;
    case ErrorCode::kNotFound:
    case ErrorCode::kUnknownScenario:
    case ErrorCode::kUnknownPatch:
      return 404;
    case ErrorCode::kIllegalTransition:
      return 409;
    case ErrorCode::kLocalizationMiss:
    case ErrorCode::kPixelOutOfRange:
    case ErrorCode::kRouteBlocked:
      return 422;
    default:
      return 500;
  }
}

struct Engine::State {
  struct Marker {
    ReplayEvent event;
    double expires_at = 0.0;
  };

  SceneHandle scene;
  ScenarioLibrary library;
  SensorRegistry sensors;
  std::vector<Resource> resources;
  PathObjects objects;
  std::optional<SpreadState> spread;
  std::vector<FireEvent> raw_events;
  std::vector<FireEvent> fire_events;
  std::unique_ptr<IncidentStore> store;
  std::unique_ptr<CommandDesk> desk;
  std::vector<Marker> markers;
};

Engine::Engine(EngineConfig config) : config_(std::move(config)), hub_(config_.stream_buffer) {
  if (!(config_.tick_hz > 0.0) || !(config_.sim_speed > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tick rate and sim speed must be positive");
  }
}

Engine::~Engine() {
  stop_ticking();
  hub_.close_all();
}

void Engine::load(EngineInputs in) {
  auto st = std::make_unique<State>();
  st->scene = std::make_shared<const TessellatedScene>(std::move(in.scene), config_.patch_size);
  st->library = std::move(in.library);
  st->sensors = std::move(in.sensors);
  st->resources = std::move(in.resources);
  st->objects = std::move(in.objects_in_path);
  st->spread.emplace(st->scene, in.materials, std::vector<Ignition>{}, in.env, config_.spread);
  StatusLog check;
  check.resources = st->resources;
  check.validate();
  st->store = config_.incident_log ? std::make_unique<IncidentStore>(*config_.incident_log)
                                   : std::make_unique<IncidentStore>();

  State* raw = st.get();
  st->desk = std::make_unique<CommandDesk>(
      [raw](const std::string& id) { return raw->library.find(id) != nullptr; }, config_.desk);
  if (config_.ticket_log) {
    if (std::filesystem::exists(*config_.ticket_log)) {
      st->desk->restore(CommandDesk::load_events(*config_.ticket_log));
    }
    st->desk->persist_to(*config_.ticket_log);
  }
  st->desk->on_event([this, raw](const TicketEvent& ev) {
    hub_.publish("ticket_transition",
                 {{"ticket", ev.ticket},
                  {"event_seq", ev.seq},
                  {"type", ev.type},
                  {"state", state_after(ev)},
                  {"body", ev.body}},
                 raw->spread->sim_time());
  });

  std::lock_guard lock(mutex_);
  state_ = std::move(st);
}

bool Engine::ready() const {
  std::lock_guard lock(mutex_);
  return state_ != nullptr;
}

HttpResponse Engine::handle(const HttpRequest& request) {
  try {
    return route(request);
  } catch (const Error& e) {
    return error_response(e);
  } catch (const nlohmann::json::exception& e) {
    return error_response(400, "SchemaError", e.what());
  } catch (const std::exception& e) {
    return error_response(500, "InternalError", e.what());
  }
}

HttpResponse Engine::route(const HttpRequest& request) {
  const auto qpos = request.target.find('?');
  const std::string path = request.target.substr(0, qpos);
  const auto query = qpos == std::string::npos
                         ? std::map<std::string, std::string>{}
                         : parse_query(std::string_view(request.target).substr(qpos + 1));
  const std::vector<std::string> p = split_path(path);
  const std::string& m = request.method;

  if (m == "GET" && p.size() == 1 && p[0] == "health") {
    return {200, {{"ready", ready()}}};
  }
  if (!ready()) return error_response(503, "NotReady", "scene and library not loaded");

  auto ticket_id = [&](const std::string& s) {
    auto id = parse_id(s);
    if (!id) throw Error(ErrorCode::kNotFound, "no ticket '" + s + "'");
    return *id;
  };

  if (p.size() == 2 && p[0] == "ingest" && m == "POST") {
    if (p[1] == "detection") return ingest_detection(request.body);
    if (p[1] == "environment") return ingest_environment(request.body);
  }
  if (p.size() == 1 && m == "GET") {
    if (p[0] == "status") return status();
    if (p[0] == "recommendations") return recommendations(query);
    if (p[0] == "tickets") return tickets();
    if (p[0] == "projection") return projection(query);
    if (p[0] == "records") return records(query);
  }
  if (p.size() == 3 && p[0] == "plans" && p[2] == "submit" && m == "POST") {
    return submit(p[1], request.body);
  }
  if (p.size() == 2 && p[0] == "tickets" && m == "GET") return ticket(ticket_id(p[1]));
  if (p.size() == 3 && p[0] == "tickets" && m == "POST") {
    if (p[2] == "decision") return decision(ticket_id(p[1]), request.body);
    if (p[2] == "dispatch") return dispatch(ticket_id(p[1]));
    if (p[2] == "outcome") return outcome(ticket_id(p[1]), request.body);
  }
  if (p.size() == 2 && p[0] == "replay" && m == "GET") return replay(p[1]);
  return error_response(404, "NotFound", "no route " + m + " " + path);
}

HttpResponse Engine::ingest_detection(const std::string& body) {
  const DetectionRecord record = parse_detection(body);
  std::lock_guard lock(mutex_);
  State& st = *state_;
  const double now = st.spread->sim_time();
  const RecordId id = st.store->append(record);
  hub_.publish("detection", record_document(id, record), now);

  const CameraPose* camera = st.sensors.camera_for(record.sensor_id);
  if (!camera) {
    return {422,
            {{"error", "LocalizationMiss"},
             {"message", "no camera bound to sensor '" + record.sensor_id + "'"},
             {"record_id", id}}};
  }
  FireEvent event;
  try {
    event = localize(st.scene->scene(), *camera, record, id);
  } catch (const Error& e) {
    return {422, {{"error", std::string(to_string(e.code()))}, {"message", e.what()}, {"record_id", id}}};
  }

  const std::size_t before = st.fire_events.size();
  st.raw_events.push_back(event);
  st.fire_events = merge_events(st.raw_events, config_.merge_radius, config_.merge_window);
  const bool new_fire = st.fire_events.size() > before;
  if (new_fire) st.spread->ignite({event.position, now});
  hub_.publish("fire_event", {{"event", event}, {"merged", !new_fire}}, now);
  publish_recommendation_locked();
  return {202, {{"record_id", id}, {"event_id", event.id}, {"fire_event", event}, {"merged", !new_fire}}};
}

HttpResponse Engine::ingest_environment(const std::string& body) {
  const json doc = parse_body(body);
  if (!doc.is_object()) throw Error(ErrorCode::kSchemaError, "environment must be an object");
  std::lock_guard lock(mutex_);
  State& st = *state_;
  Environment env = st.spread->environment();
  for (const char* key : {"air_temp", "humidity", "wind_speed", "wind_direction"}) {
    if (doc.contains(key) && !doc.at(key).is_number()) {
      throw Error(ErrorCode::kSchemaError, std::string(key) + " must be a number");
    }
  }
  env.air_temp = doc.value("air_temp", env.air_temp);
  env.humidity = doc.value("humidity", env.humidity);
  env.wind_speed = doc.value("wind_speed", env.wind_speed);
  env.wind_direction = doc.value("wind_direction", env.wind_direction);
  env.validate();
  const bool changed = !(env == st.spread->environment());
  if (changed) {
    st.spread->set_environment(env);
    publish_recommendation_locked();
  }
  return {202, {{"accepted", true}, {"changed", changed}, {"env", env}}};
}

StatusLog Engine::status_locked() const {
  const State& st = *state_;
  StatusLog s;
  s.fire_events = st.fire_events;
  s.spread = std::make_shared<const SpreadState>(*st.spread);
  s.env = st.spread->environment();
  s.resources = st.resources;
  s.objects_in_path = st.objects;
  for (const FireEvent& e : st.fire_events) {
    s.alert_level = std::max(s.alert_level, severity_from_threat(e.threat_level));
  }
  return s;
}

json Engine::status_document_locked() const {
  const StatusLog s = status_locked();
  json doc = s;
  doc["features"] = featurize(s);
  json markers = json::array();
  for (const auto& mk : state_->markers) {
    json m = mk.event;
    m["expires_at"] = mk.expires_at;
    markers.push_back(std::move(m));
  }
  doc["replay_markers"] = std::move(markers);
  doc["records"] = state_->store->size();
  return doc;
}

HttpResponse Engine::status() {
  std::lock_guard lock(mutex_);
  return {200, status_document_locked()};
}

HttpResponse Engine::recommendations(const std::map<std::string, std::string>& query) {
  std::size_t k = config_.default_k;
  if (auto it = query.find("k"); it != query.end()) {
    auto v = parse_id(it->second);
    if (!v || *v < 1) throw Error(ErrorCode::kInvalidArgument, "k must be a positive integer");
    k = *v;
  }
  std::lock_guard lock(mutex_);
  State& st = *state_;
  if (st.fire_events.empty()) {
    return {200,
            {{"status", "NoMatches"},
             {"message", "no active fire events"},
             {"matches", json::array()},
             {"recommendations", json::array()}}};
  }
  const StatusLog s = status_locked();
  const auto matches = match(st.library, s, k, config_.match);
  const auto recs = recommend(matches, st.library, st.desk->ledger(), config_.rank);
  return {200,
          {{"status", "ok"},
           {"features", featurize(s)},
           {"matches", matches},
           {"recommendations", recs}}};
}

void Engine::publish_recommendation_locked() {
  State& st = *state_;
  if (st.fire_events.empty() || st.library.empty()) return;
  try {
    const StatusLog s = status_locked();
    const auto matches = match(st.library, s, 1, config_.match);
    const auto recs = recommend(matches, st.library, st.desk->ledger(), config_.rank);
    hub_.publish("recommendation",
                 {{"match", matches.front()}, {"top", recs.front()}}, st.spread->sim_time());
  } catch (const Error&) {
    // A library that cannot be matched yields no recommendation event.
  }
}

HttpResponse Engine::submit(const std::string& plan_id, const std::string& body) {
  const json doc = parse_body(body);
  const std::string scenario_id = doc.at("scenario_id").get<std::string>();
  std::lock_guard lock(mutex_);
  State& st = *state_;
  const ScenarioRecord* scenario = st.library.find(scenario_id);
  if (!scenario) throw Error(ErrorCode::kUnknownScenario, "scenario '" + scenario_id + "'");
  auto plan = std::find_if(scenario->plans.begin(), scenario->plans.end(),
                           [&](const InterventionPlan& p) { return p.id == plan_id; });
  if (plan == scenario->plans.end()) {
    throw Error(ErrorCode::kNotFound, "scenario '" + scenario_id + "' has no plan '" + plan_id + "'");
  }
  return {201, st.desk->submit(*plan, scenario_id, wall_now())};
}

HttpResponse Engine::decision(TicketId id, const std::string& body) {
  json doc = parse_body(body);
  if (!doc.contains("approver_id")) throw Error(ErrorCode::kSchemaError, "approver_id missing");
  doc["timestamp"] = wall_now();
  const Decision d = from_document<Decision>(doc, "decision");
  std::lock_guard lock(mutex_);
  return {200, state_->desk->decide(id, d)};
}

HttpResponse Engine::dispatch(TicketId id) {
  std::lock_guard lock(mutex_);
  State& st = *state_;
  const StatusLog s = status_locked();
  DispatchContext ctx;
  ctx.scene = &st.scene->scene();
  ctx.spread = &*st.spread;
  ctx.status = &s;
  ctx.clearance = config_.route_clearance;
  ctx.voxel = config_.route_voxel;
  const CommandTicket t = st.desk->dispatch(id, ctx, wall_now());
  for (const Action& a : t.dispatch->actions) {
    auto kind = resource_for(a.kind);
    if (!kind) continue;
    std::int64_t left = a.quantity;
    for (Resource& r : st.resources) {
      if (r.kind != *kind || left == 0) continue;
      const std::int64_t take = std::min(left, r.available);
      r.available -= take;
      left -= take;
    }
  }
  return {200, t};
}

HttpResponse Engine::outcome(TicketId id, const std::string& body) {
  const json doc = parse_body(body);
  if (!doc.contains("success") || !doc.at("success").is_boolean()) {
    throw Error(ErrorCode::kSchemaError, "success must be a boolean");
  }
  std::lock_guard lock(mutex_);
  return {200, state_->desk->report_outcome(id, doc.at("success").get<bool>(),
                                            doc.value("note", std::string()), wall_now())};
}

HttpResponse Engine::tickets() {
  std::lock_guard lock(mutex_);
  return {200, {{"tickets", state_->desk->tickets()}}};
}

HttpResponse Engine::ticket(TicketId id) {
  std::lock_guard lock(mutex_);
  auto t = state_->desk->get(id);
  if (!t) throw Error(ErrorCode::kNotFound, "no ticket " + std::to_string(id));
  return {200, *t};
}

HttpResponse Engine::replay(const std::string& record_id) {
  auto id = parse_id(record_id);
  if (!id) throw Error(ErrorCode::kNotFound, "no record '" + record_id + "'");
  std::lock_guard lock(mutex_);
  State& st = *state_;
  const ReplayEvent ev = ivsr::replay(*st.store, *id, st.scene->scene(), st.sensors);
  const double now = st.spread->sim_time();
  st.markers.push_back({ev, now + ev.lifetime});
  json doc = ev;
  doc["expires_at"] = now + ev.lifetime;
  hub_.publish("replay", doc, now);
  return {200, doc};
}

HttpResponse Engine::projection(const std::map<std::string, std::string>& query) {
  auto it = query.find("horizon_s");
  if (it == query.end()) throw Error(ErrorCode::kInvalidArgument, "horizon_s is required");
  double horizon = 0.0;
  auto r = std::from_chars(it->second.data(), it->second.data() + it->second.size(), horizon);
  if (r.ec != std::errc{} || r.ptr != it->second.data() + it->second.size() ||
      !std::isfinite(horizon) || horizon <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "horizon_s must be a positive number");
  }
  std::optional<SpreadState> clone;
  {
    std::lock_guard lock(mutex_);
    clone.emplace(*state_->spread);
  }
  const double start = clone->sim_time();
  clone->advance_to(start + horizon, config_.spread.dt);
  json doc = spread_summary(*clone);
  doc["horizon_s"] = horizon;
  doc["from_sim_time"] = start;
  return {200, doc};
}

HttpResponse Engine::records(const std::map<std::string, std::string>& query) {
  TimeRange range;
  auto bound = [&](const char* key) -> std::optional<Timestamp> {
    auto it = query.find(key);
    if (it == query.end()) return std::nullopt;
    auto t = Timestamp::parse_loose(it->second);
    if (!t) throw Error(ErrorCode::kInvalidArgument, std::string("bad ") + key + " timestamp");
    return t;
  };
  range.from = bound("from");
  range.to = bound("to");
  std::optional<std::string> sensor;
  if (auto it = query.find("sensor"); it != query.end()) sensor = it->second;
  std::lock_guard lock(mutex_);
  json out = json::array();
  for (const StoredRecord& r : state_->store->query(range, sensor)) {
    out.push_back(record_document(r.id, r.record));
  }
  return {200, {{"records", out}}};
}

void Engine::expire_markers_locked() {
  const double now = state_->spread->sim_time();
  std::erase_if(state_->markers, [&](const State::Marker& m) { return m.expires_at <= now + 1e-9; });
}

void Engine::tick() {
  std::lock_guard lock(mutex_);
  if (!state_) return;
  SpreadState& spread = *state_->spread;
  const double before = spread.burning_area();
  spread.step(config_.spread.dt);
  expire_markers_locked();
  hub_.publish("spread_tick",
               {{"sim_time", spread.sim_time()},
                {"burning_area", spread.burning_area()},
                {"new_area", spread.burning_area() - before}},
               spread.sim_time());
}

void Engine::start_ticking() {
  std::lock_guard lock(tick_mutex_);
  if (ticking_) return;
  ticking_ = true;
  const auto period = std::chrono::duration<double>(1.0 / (config_.tick_hz * config_.sim_speed));
  ticker_ = std::thread([this, period] {
    auto next = std::chrono::steady_clock::now();
    std::unique_lock lk(tick_mutex_);
    while (ticking_) {
      next += std::chrono::duration_cast<std::chrono::steady_clock::duration>(period);
      if (tick_cv_.wait_until(lk, next, [&] { return !ticking_; })) break;
      lk.unlock();
      tick();
      lk.lock();
    }
  });
}

void Engine::stop_ticking() {
  {
    std::lock_guard lock(tick_mutex_);
    if (!ticking_) return;
    ticking_ = false;
  }
  tick_cv_.notify_all();
  if (ticker_.joinable()) ticker_.join();
}

std::uint64_t Engine::state_hash() const {
  std::lock_guard lock(mutex_);
  if (!state_) return 0;
  std::uint64_t h = fnv(std::to_string(state_->spread->hash()));
  h = fnv(json(state_->fire_events).dump(), h);
  h = fnv(json(state_->desk->events()).dump(), h);
  h = fnv(json(state_->resources).dump(), h);
  h = fnv(std::to_string(state_->store->size()), h);
  return h;
}

}  // namespace ivsr
