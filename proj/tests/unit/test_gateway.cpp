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

#include <gtest/gtest.h>

#include <chrono>
#include <thread>

#include "engine_fixture.hpp"
#include "ivsr/gateway.hpp"
#include "ivsr/json_io.hpp"

namespace ivsr {
namespace {

using namespace std::chrono_literals;

class EngineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { library_ = new ScenarioLibrary(testing::sample_library()); }
  static void TearDownTestSuite() { delete library_; }

  void SetUp() override { engine_.load(testing::sample_inputs(*library_)); }

  HttpResponse get(const std::string& target) { return engine_.handle({"GET", target, ""}); }
  HttpResponse post(const std::string& target, const std::string& body) {
    return engine_.handle({"POST", target, body});
  }
  HttpResponse post(const std::string& target, const json& body) { return post(target, body.dump()); }

  static ScenarioLibrary* library_;
  Engine engine_;
};

ScenarioLibrary* EngineTest::library_ = nullptr;

TEST(EngineBare, NotReadyBeforeLoad) {
  Engine e;
  EXPECT_EQ(e.handle({"GET", "/status", ""}).status, 503);
  EXPECT_EQ(e.handle({"GET", "/health", ""}).status, 200);
}

TEST(Http, StatusMapping) {
  EXPECT_EQ(http_status(ErrorCode::kSchemaError), 400);
  EXPECT_EQ(http_status(ErrorCode::kNotFound), 404);
  EXPECT_EQ(http_status(ErrorCode::kIllegalTransition), 409);
  EXPECT_EQ(http_status(ErrorCode::kLocalizationMiss), 422);
  EXPECT_EQ(http_status(ErrorCode::kStorageError), 500);
}

TEST_F(EngineTest, IngestSingleEntryShowsOneFire) {
  const auto r = post("/ingest/detection", testing::kSingleEntry);
  ASSERT_EQ(r.status, 202) << r.body.dump();
  EXPECT_TRUE(r.body.contains("event_id"));
  const auto s = get("/status");
  ASSERT_EQ(s.status, 200);
  ASSERT_EQ(s.body.at("fire_events").size(), 1u);
  EXPECT_EQ(s.body.at("alert_level"), "high");
  EXPECT_DOUBLE_EQ(s.body.at("fire_events")[0].at("peak_temp").get<double>(), 107.0);
}

TEST_F(EngineTest, RepeatDetectionMerges) {
  post("/ingest/detection", testing::kSingleEntry);
  const auto r = post("/ingest/detection", testing::kSingleEntry);
  EXPECT_TRUE(r.body.at("merged").get<bool>());
  EXPECT_EQ(get("/status").body.at("fire_events").size(), 1u);
}

TEST_F(EngineTest, MalformedAndUnboundDetections) {
  EXPECT_EQ(post("/ingest/detection", std::string("{oops")).status, 400);
  EXPECT_EQ(post("/ingest/detection", testing::kDailyEntryAsPrinted).status, 400);
  std::string unbound = testing::kSingleEntry;
  unbound.replace(unbound.find(R"("SensorId": "")"), 14, R"("SensorId": "roof-7")");
  const auto r = post("/ingest/detection", unbound);
  EXPECT_EQ(r.status, 422);
  const auto recs = get("/records?sensor=roof-7");
  ASSERT_EQ(recs.status, 200);
  EXPECT_EQ(recs.body.at("records").size(), 1u);
}

TEST_F(EngineTest, EnvironmentMessage) {
  const json env = {{"air_temp", 72.0}, {"humidity", 12.0}, {"wind_speed", 18.0}, {"wind_direction", 0.0}};
  auto r = post("/ingest/environment", env);
  ASSERT_EQ(r.status, 202);
  EXPECT_TRUE(r.body.at("changed").get<bool>());
  const auto s = get("/status");
  EXPECT_DOUBLE_EQ(s.body.at("env").at("humidity").get<double>(), 12.0);
  const auto hash = engine_.state_hash();
  r = post("/ingest/environment", env);
  EXPECT_EQ(r.status, 202);
  EXPECT_FALSE(r.body.at("changed").get<bool>());
  EXPECT_EQ(engine_.state_hash(), hash);
  EXPECT_EQ(post("/ingest/environment", json{{"humidity", 140}}).status, 400);
}

TEST_F(EngineTest, RecommendationsNoMatchesAndBadK) {
  const auto r = get("/recommendations");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body.at("status"), "NoMatches");
  EXPECT_EQ(get("/recommendations?k=0").status, 400);
  EXPECT_TRUE(get("/status").body.at("fire_events").empty());
}

TEST_F(EngineTest, RecommendationsFollowLinearScan) {
  post("/ingest/detection", testing::kSingleEntry);
  const auto r = get("/recommendations?k=2");
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_EQ(r.body.at("matches").size(), 2u);
  const auto f = r.body.at("features").get<FeatureVector>();
  const auto expected = testing::scan_top(*library_, f, {0.0});
  EXPECT_EQ(r.body.at("matches")[0].at("scenario_id"), expected.scenario_id);
  EXPECT_EQ(r.body.at("recommendations")[0].at("plan").at("id"), expected.plan_id);
}

TEST_F(EngineTest, TicketFlow) {
  post("/ingest/detection", testing::kSingleEntry);
  const auto rec = get("/recommendations").body;
  const std::string scenario = rec.at("matches")[0].at("scenario_id");
  const std::string plan = rec.at("recommendations")[0].at("plan").at("id");
  auto sub = post("/plans/" + plan + "/submit", json{{"scenario_id", scenario}});
  ASSERT_EQ(sub.status, 201) << sub.body.dump();
  const std::string id = std::to_string(sub.body.at("id").get<int>());
  EXPECT_EQ(sub.body.at("state"), "PendingApproval");
  EXPECT_EQ(post("/tickets/" + id + "/decision", json{{"verdict", "approve"}}).status, 400);
  auto dec = post("/tickets/" + id + "/decision", json{{"verdict", "approve"}, {"approver_id", "chief"}});
  ASSERT_EQ(dec.status, 200) << dec.body.dump();
  EXPECT_EQ(dec.body.at("state"), "Approved");
  EXPECT_EQ(post("/tickets/" + id + "/decision", json{{"verdict", "approve"}, {"approver_id", "x"}}).status,
            409);
  EXPECT_EQ(post("/tickets/999/decision", json{{"verdict", "approve"}, {"approver_id", "x"}}).status, 404);
  auto dis = post("/tickets/" + id + "/dispatch", std::string());
  ASSERT_EQ(dis.status, 200) << dis.body.dump();
  EXPECT_EQ(dis.body.at("state"), "Dispatched");
  auto out = post("/tickets/" + id + "/outcome", json{{"success", true}, {"note", "contained"}});
  ASSERT_EQ(out.status, 200);
  EXPECT_EQ(out.body.at("state"), "Executed");
  EXPECT_EQ(get("/tickets").body.at("tickets").size(), 1u);
  EXPECT_EQ(get("/tickets/" + id).status, 200);
  EXPECT_EQ(post("/plans/nope/submit", json{{"scenario_id", scenario}}).status, 404);
  EXPECT_EQ(post("/plans/" + plan + "/submit", json{{"scenario_id", "nope"}}).status, 404);
}

TEST_F(EngineTest, ReplayLifetime) {
  post("/ingest/detection", testing::kSingleEntry);
  const auto r = get("/replay/0");
  ASSERT_EQ(r.status, 200) << r.body.dump();
  EXPECT_DOUBLE_EQ(r.body.at("lifetime").get<double>(), 30.0);
  EXPECT_EQ(get("/replay/42").status, 404);
  EXPECT_EQ(get("/status").body.at("replay_markers").size(), 1u);
  for (int i = 0; i < 60; ++i) engine_.tick();
  EXPECT_TRUE(get("/status").body.at("replay_markers").empty());
}

TEST_F(EngineTest, ProjectionIsIsolatedAndMatchesLiveRun) {
  post("/ingest/detection", testing::kSingleEntry);
  const auto hash = engine_.state_hash();
  const auto two_ticks = get("/projection?horizon_s=1.0");
  ASSERT_EQ(two_ticks.status, 200);
  EXPECT_EQ(engine_.state_hash(), hash);
  EXPECT_DOUBLE_EQ(get("/status").body.at("sim_time").get<double>(), 0.0);
  engine_.tick();
  const auto one_tick = get("/projection?horizon_s=0.5");
  EXPECT_EQ(one_tick.body.at("hash"), two_ticks.body.at("hash"));
  EXPECT_EQ(one_tick.body.at("arrival_map"), two_ticks.body.at("arrival_map"));
  EXPECT_EQ(get("/projection?horizon_s=0").status, 400);
  EXPECT_EQ(get("/projection?horizon_s=-3").status, 400);
}

TEST_F(EngineTest, StatusReadsAreIdempotent) {
  post("/ingest/detection", testing::kSingleEntry);
  EXPECT_EQ(get("/status").body, get("/status").body);
}

TEST_F(EngineTest, StreamCarriesTransitionsInOrder) {
  auto sub = engine_.stream().subscribe();
  post("/ingest/detection", testing::kSingleEntry);
  engine_.tick();
  std::vector<std::string> kinds;
  std::uint64_t last = 0;
  while (auto ev = sub->next(10ms)) {
    EXPECT_EQ(ev->seq, last + 1);
    last = ev->seq;
    kinds.push_back(ev->kind);
  }
  EXPECT_EQ(kinds, (std::vector<std::string>{"detection", "fire_event", "recommendation", "spread_tick"}));
}

TEST(Stream, SlowSubscriberIsDropped) {
  StreamHub hub(4);
  auto slow = hub.subscribe();
  auto fast = hub.subscribe();
  for (int i = 0; i < 4; ++i) {
    hub.publish("spread_tick", {{"i", i}}, 0);
    ASSERT_TRUE(fast->next(1ms));
  }
  hub.publish("spread_tick", {{"i", 4}}, 0);
  EXPECT_TRUE(slow->overflowed());
  EXPECT_TRUE(slow->closed());
  EXPECT_FALSE(fast->overflowed());
  EXPECT_EQ(hub.subscribers(), 1u);
}

TEST_F(EngineTest, TickDriverAdvancesInSimSpeedMode) {
  Engine fast(EngineConfig{.tick_hz = 2.0, .sim_speed = 50.0});
  fast.load(testing::sample_inputs(*library_));
  fast.start_ticking();
  std::this_thread::sleep_for(200ms);
  fast.stop_ticking();
  const double t = fast.handle({"GET", "/status", ""}).body.at("sim_time").get<double>();
  EXPECT_GT(t, 2.0);
}

}  // namespace
}  // namespace ivsr
