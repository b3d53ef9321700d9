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

// HTTP/1.1 + WebSocket transport for the engine. Request/response endpoints
// are served on every path except /stream, which upgrades to a WebSocket
// carrying one JSON StreamEvent per text frame.

#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "ivsr/gateway.hpp"

namespace ivsr {

class GatewayServer {
 public:
  // Port 0 picks a free port; see port() after start().
  GatewayServer(Engine& engine, std::string address = "127.0.0.1", std::uint16_t port = 0);
  ~GatewayServer();

  GatewayServer(const GatewayServer&) = delete;
  GatewayServer& operator=(const GatewayServer&) = delete;

  void start();
  std::uint16_t port() const;
  // Closes the listener and every open connection, then joins their threads.
  void stop();
  // Blocks until stop() is called from another thread.
  void wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ivsr
