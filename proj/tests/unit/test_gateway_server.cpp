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
#include <httplib.h>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <chrono>
#include <thread>

#include "engine_fixture.hpp"
#include "ivsr/gateway_server.hpp"

namespace ivsr {
namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
using tcp = asio::ip::tcp;
using namespace std::chrono_literals;

class ServerTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { library_ = new ScenarioLibrary(testing::sample_library()); }
  static void TearDownTestSuite() { delete library_; }

  void SetUp() override {
    engine_.load(testing::sample_inputs(*library_));
    server_ = std::make_unique<GatewayServer>(engine_);
    server_->start();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", server_->port());
  }
  void TearDown() override { server_->stop(); }

  json body(const httplib::Result& r) { return json::parse(r->body); }

  static ScenarioLibrary* library_;
  Engine engine_;
  std::unique_ptr<GatewayServer> server_;
  std::unique_ptr<httplib::Client> client_;
};

ScenarioLibrary* ServerTest::library_ = nullptr;

TEST_F(ServerTest, HttpStatusCodesPassThrough) {
  auto r = client_->Get("/health");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_TRUE(body(r).at("ready").get<bool>());
  EXPECT_EQ(r->get_header_value("Content-Type"), "application/json");

  r = client_->Post("/ingest/detection", testing::kSingleEntry, "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 202);
  r = client_->Post("/ingest/detection", "{", "application/json");
  EXPECT_EQ(r->status, 400);
  r = client_->Get("/tickets/77");
  EXPECT_EQ(r->status, 404);
  r = client_->Get("/recommendations?k=1");
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(body(r).at("matches").size(), 1u);
  r = client_->Get("/status");
  EXPECT_EQ(body(r).at("fire_events").size(), 1u);
}

TEST_F(ServerTest, WebSocketStreamDeliversEvents) {
  asio::io_context ioc;
  beast::websocket::stream<tcp::socket> ws(ioc);
  tcp::resolver resolver(ioc);
  asio::connect(ws.next_layer(), resolver.resolve("127.0.0.1", std::to_string(server_->port())));
  ws.handshake("127.0.0.1", "/stream");
  for (int i = 0; i < 200 && engine_.stream().subscribers() == 0; ++i) std::this_thread::sleep_for(5ms);
  ASSERT_EQ(engine_.stream().subscribers(), 1u);

  auto r = client_->Post("/ingest/detection", testing::kSingleEntry, "application/json");
  ASSERT_EQ(r->status, 202);
  std::vector<std::string> kinds;
  for (int i = 0; i < 3; ++i) {
    beast::flat_buffer buf;
    ws.read(buf);
    const json ev = json::parse(beast::buffers_to_string(buf.data()));
    EXPECT_EQ(ev.at("seq").get<int>(), i + 1);
    kinds.push_back(ev.at("kind"));
  }
  EXPECT_EQ(kinds, (std::vector<std::string>{"detection", "fire_event", "recommendation"}));
  ws.close(beast::websocket::close_code::normal);
}

}  // namespace
}  // namespace ivsr
