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

#include "ivsr/gateway_server.hpp"

#include <atomic>
#include <condition_variable>
#include <list>
#include <mutex>
#include <thread>

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "ivsr/error.hpp"

namespace ivsr {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

struct GatewayServer::Impl {
  struct Connection {
    std::shared_ptr<tcp::socket> socket;
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
  };

  Engine& engine;
  std::string address;
  std::uint16_t requested_port;
  asio::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::uint16_t bound_port = 0;
  std::thread accept_thread;
  std::atomic<bool> stopping{false};
  std::mutex mutex;
  std::condition_variable stopped_cv;
  bool stopped = false;
  std::list<Connection> connections;

  Impl(Engine& e, std::string addr, std::uint16_t port)
      : engine(e), address(std::move(addr)), requested_port(port) {}

  void reap() {
    for (auto it = connections.begin(); it != connections.end();) {
      if (it->done->load()) {
        it->thread.join();
        it = connections.erase(it);
      } else {
        ++it;
      }
    }
  }

  void accept_loop() {
    while (!stopping) {
      auto socket = std::make_shared<tcp::socket>(ioc);
      boost::system::error_code ec;
      acceptor.accept(*socket, ec);
      if (ec) {
        if (stopping) break;
        continue;
      }
      std::lock_guard lock(mutex);
      if (stopping) break;
      reap();
      auto done = std::make_shared<std::atomic<bool>>(false);
      connections.push_back({socket, std::thread([this, socket, done] {
                               serve(*socket);
                               done->store(true);
                             }),
                             done});
    }
  }

  template <typename Body>
  static void add_cors(http::response<Body>& res) {
    res.set(http::field::access_control_allow_origin, "*");
    res.set(http::field::access_control_allow_headers, "Content-Type");
    res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
  }

  void serve(tcp::socket& socket) {
    beast::flat_buffer buffer;
    boost::system::error_code ec;
    while (!stopping) {
      http::request<http::string_body> req;
      http::read(socket, buffer, req, ec);
      if (ec) break;
      if (websocket::is_upgrade(req)) {
        if (req.target() == "/stream") stream(socket, std::move(req));
        break;
      }
      http::response<http::string_body> res;
      res.version(req.version());
      add_cors(res);
      if (req.method() == http::verb::options) {
        res.result(http::status::no_content);
      } else {
        HttpRequest r{std::string(req.method_string()), std::string(req.target()), req.body()};
        HttpResponse out = engine.handle(r);
        res.result(static_cast<http::status>(out.status));
        res.set(http::field::content_type, "application/json");
        res.body() = out.body.dump();
      }
      res.keep_alive(req.keep_alive());
      res.prepare_payload();
      http::write(socket, res, ec);
      if (ec || !req.keep_alive()) break;
    }
    socket.shutdown(tcp::socket::shutdown_both, ec);
  }

  void stream(tcp::socket& socket, http::request<http::string_body> req) {
    websocket::stream<tcp::socket&> ws(socket);
    boost::system::error_code ec;
    ws.accept(req, ec);
    if (ec) return;
    ws.text(true);
    auto sub = engine.stream().subscribe();
    while (!stopping) {
      // Client frames are drained and discarded; a close frame ends the loop.
      if (socket.available(ec) > 0) {
        beast::flat_buffer incoming;
        ws.read(incoming, ec);
        if (ec) break;
      }
      auto ev = sub->next(std::chrono::milliseconds(50));
      if (ev) {
        ws.write(asio::buffer(ev->to_json().dump()), ec);
        if (ec) break;
        continue;
      }
      if (sub->closed()) {
        const bool overflow = sub->overflowed();
        ws.close(websocket::close_reason(overflow ? websocket::close_code::policy_error
                                                  : websocket::close_code::going_away,
                                         overflow ? "stream buffer overflow" : "shutting down"),
                 ec);
        break;
      }
    }
    engine.stream().unsubscribe(sub);
    sub->close();
  }
};

GatewayServer::GatewayServer(Engine& engine, std::string address, std::uint16_t port)
    : impl_(std::make_unique<Impl>(engine, std::move(address), port)) {}

GatewayServer::~GatewayServer() { stop(); }

void GatewayServer::start() {
  boost::system::error_code ec;
  const auto addr = asio::ip::make_address(impl_->address, ec);
  if (ec) throw Error(ErrorCode::kInvalidArgument, "bad listen address " + impl_->address);
  const tcp::endpoint endpoint(addr, impl_->requested_port);
  impl_->acceptor.open(endpoint.protocol(), ec);
  if (!ec) impl_->acceptor.set_option(asio::socket_base::reuse_address(true), ec);
  if (!ec) impl_->acceptor.bind(endpoint, ec);
  if (!ec) impl_->acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec) throw Error(ErrorCode::kStorageError, "cannot listen on port " +
                                                    std::to_string(impl_->requested_port) + ": " +
                                                    ec.message());
  impl_->bound_port = impl_->acceptor.local_endpoint().port();
  impl_->accept_thread = std::thread([this] { impl_->accept_loop(); });
}

std::uint16_t GatewayServer::port() const { return impl_->bound_port; }

void GatewayServer::stop() {
  if (!impl_ || impl_->stopping.exchange(true)) return;
  boost::system::error_code ec;
  impl_->acceptor.cancel(ec);
  impl_->acceptor.close(ec);
  if (impl_->accept_thread.joinable()) {
    // Unblock a pending accept() by connecting to ourselves.
    tcp::socket poke(impl_->ioc);
    poke.connect(tcp::endpoint(asio::ip::make_address(impl_->address, ec), impl_->bound_port), ec);
    impl_->accept_thread.join();
  }
  std::list<Impl::Connection> conns;
  {
    std::lock_guard lock(impl_->mutex);
    conns.swap(impl_->connections);
  }
  for (auto& c : conns) c.socket->shutdown(tcp::socket::shutdown_both, ec);
  for (auto& c : conns) c.thread.join();
  {
    std::lock_guard lock(impl_->mutex);
    impl_->stopped = true;
  }
  impl_->stopped_cv.notify_all();
}

void GatewayServer::wait() {
  std::unique_lock lock(impl_->mutex);
  impl_->stopped_cv.wait(lock, [&] { return impl_->stopped; });
}

}  // namespace ivsr
