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

// The twin engine behind the network gateway.
//
// Engine owns all live state: the scene, the running spread simulation, the
// status log, the incident store, the command desk and the stream hub.
// Requests are plain method/path/body triples, so the engine can be driven
// directly in tests or through GatewayServer.

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "ivsr/command_loop.hpp"
#include "ivsr/error.hpp"
#include "ivsr/incident_log.hpp"
#include "ivsr/localization.hpp"
#include "ivsr/scenario_library.hpp"
#include "ivsr/spread.hpp"
#include "ivsr/status_log.hpp"

namespace ivsr {

inline constexpr std::size_t kDefaultStreamBuffer = 1024;

struct StreamEvent {
  std::uint64_t seq = 0;  // per subscriber
  std::string kind;       // detection, fire_event, spread_tick, recommendation, ticket_transition, replay
  nlohmann::json payload;
  double sim_time = 0.0;

  nlohmann::json to_json() const;
};

class StreamSubscriber {
 public:
  explicit StreamSubscriber(std::size_t capacity) : capacity_(capacity) {}

  // Waits up to `timeout`; absent on timeout or once closed and drained.
  std::optional<StreamEvent> next(std::chrono::milliseconds timeout);
  bool closed() const;
  // True when the subscriber was dropped for falling behind.
  bool overflowed() const;
  void close();

 private:
  friend class StreamHub;
  bool push(StreamEvent event);  // false on overflow

  mutable std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<StreamEvent> queue_;
  std::size_t capacity_;
  std::uint64_t next_seq_ = 1;
  bool closed_ = false;
  bool overflowed_ = false;
};

// Fan-out to independent bounded subscriber queues. A subscriber whose queue
// is full is closed and removed instead of stalling the publisher.
class StreamHub {
 public:
  explicit StreamHub(std::size_t capacity = kDefaultStreamBuffer) : capacity_(capacity) {}

  std::shared_ptr<StreamSubscriber> subscribe();
  void unsubscribe(const std::shared_ptr<StreamSubscriber>& sub);
  void publish(const std::string& kind, const nlohmann::json& payload, double sim_time);
  std::size_t subscribers() const;
  void close_all();

 private:
  mutable std::mutex mutex_;
  std::size_t capacity_;
  std::vector<std::shared_ptr<StreamSubscriber>> subs_;
};

struct HttpRequest {
  std::string method;  // GET, POST
  std::string target;  // path with optional query string
  std::string body;
};

struct HttpResponse {
  int status = 200;
  nlohmann::json body;
};

// HTTP status for an engine error.
int http_status(ErrorCode code);

struct EngineConfig {
  double tick_hz = 2.0;
  double sim_speed = 1.0;
  double merge_radius = kDefaultMergeRadius;
  double merge_window = kDefaultMergeWindow;
  std::size_t stream_buffer = kDefaultStreamBuffer;
  std::size_t default_k = 3;
  MatchConfig match;
  RankWeights rank;
  DeskConfig desk;
  SpreadConfig spread;
  double patch_size = 0.25;
  double route_clearance = kDefaultClearance;
  double route_voxel = kDefaultVoxelSize;
  std::optional<std::filesystem::path> incident_log;  // memory only when unset
  std::optional<std::filesystem::path> ticket_log;
};

struct EngineInputs {
  Scene scene;
  ScenarioLibrary library;
  std::vector<MaterialProfile> materials;
  SensorRegistry sensors;
  std::vector<Resource> resources;
  Environment env;
  PathObjects objects_in_path;
};

class Engine {
 public:
  explicit Engine(EngineConfig config = {});
  ~Engine();

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // Validates the inputs and makes the engine ready. Throws on bad inputs.
  void load(EngineInputs inputs);
  bool ready() const;

  HttpResponse handle(const HttpRequest& request);

  // One simulation step of config.spread.dt seconds.
  void tick();
  // Runs tick() on a background thread every 1 / (tick_hz · sim_speed) s.
  void start_ticking();
  void stop_ticking();

  StreamHub& stream() { return hub_; }
  const EngineConfig& config() const { return config_; }

  // Live-state fingerprint: spread hash, fire events, tickets, environment.
  std::uint64_t state_hash() const;

 private:
  struct State;

  HttpResponse route(const HttpRequest& request);
  HttpResponse ingest_detection(const std::string& body);
  HttpResponse ingest_environment(const std::string& body);
  HttpResponse status();
  HttpResponse recommendations(const std::map<std::string, std::string>& query);
  HttpResponse submit(const std::string& plan_id, const std::string& body);
  HttpResponse decision(TicketId id, const std::string& body);
  HttpResponse dispatch(TicketId id);
  HttpResponse outcome(TicketId id, const std::string& body);
  HttpResponse tickets();
  HttpResponse ticket(TicketId id);
  HttpResponse replay(const std::string& record_id);
  HttpResponse projection(const std::map<std::string, std::string>& query);
  HttpResponse records(const std::map<std::string, std::string>& query);

  StatusLog status_locked() const;
  nlohmann::json status_document_locked() const;
  void publish_recommendation_locked();
  void expire_markers_locked();

  EngineConfig config_;
  StreamHub hub_;
  mutable std::mutex mutex_;
  std::unique_ptr<State> state_;

  std::thread ticker_;
  std::mutex tick_mutex_;
  std::condition_variable tick_cv_;
  bool ticking_ = false;
};

}  // namespace ivsr
