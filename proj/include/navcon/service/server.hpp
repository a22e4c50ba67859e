#pragma once

#include <chrono>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "navcon/service/api.hpp"

namespace navcon::service {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

struct ServerConfig {
  std::string address = "127.0.0.1";
  unsigned short port = 0;  // 0 picks a free port
  int io_threads = 2;
  int worker_threads = 2;
  double event_period_s = 0.1;  // wall-clock spacing of streamed pose events
};

/// HTTP API plus a WebSocket pose stream on one port.
class Server {
 public:
  Server(SessionHub& hub, ServerConfig cfg) : hub_(hub), cfg_(std::move(cfg)), acceptor_(ioc_), workers_(cfg_.worker_threads) {}
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;
  ~Server() { stop(); }

  void start() {
    const tcp::endpoint ep(net::ip::make_address(cfg_.address), cfg_.port);
    acceptor_.open(ep.protocol());
    acceptor_.set_option(net::socket_base::reuse_address(true));
    acceptor_.bind(ep);
    acceptor_.listen(net::socket_base::max_listen_connections);
    hub_.set_event_sink([this](const std::string& scene, std::vector<pipeline::FollowEvent> events,
                               std::function<void()> release) { play(scene, std::move(events), std::move(release)); });
    accept();
    for (int i = 0; i < cfg_.io_threads; ++i) threads_.emplace_back([this] { ioc_.run(); });
  }

  [[nodiscard]] unsigned short port() const { return acceptor_.local_endpoint().port(); }

  /// Blocks the calling thread until stop() is called from elsewhere.
  void wait() {
    for (auto& t : threads_)
      if (t.joinable()) t.join();
  }

  void stop() {
    if (stopped_) return;
    stopped_ = true;
    hub_.set_event_sink({});
    ioc_.stop();
    for (auto& t : threads_)
      if (t.joinable()) t.join();
    workers_.join();
  }

 private:
  class WsSession;

  class HttpSession : public std::enable_shared_from_this<HttpSession> {
   public:
    HttpSession(tcp::socket socket, Server& server) : stream_(std::move(socket)), server_(server) {}

    void run() {
      net::dispatch(stream_.get_executor(), [self = shared_from_this()] { self->read(); });
    }

   private:
    void read() {
      req_ = {};
      stream_.expires_after(std::chrono::seconds(60));
      http::async_read(stream_, buffer_, req_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
        if (ec) return self->close();
        self->on_request();
      });
    }

    void on_request() {
      if (websocket::is_upgrade(req_)) {
        if (detail::split_target(std::string(req_.target())).path != "/ws") return respond(404, json{{"error", "no route"}});
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), server_)->run(std::move(req_));
        return;
      }
      if (req_.method() == http::verb::options) return respond(204, nullptr);
      ApiRequest api{std::string(req_.method_string()), std::string(req_.target()), req_.body()};
      net::post(server_.workers_, [self = shared_from_this(), api = std::move(api)] {
        ApiResponse res;
        try {
          res = handle_api(self->server_.hub_, api);
        } catch (const std::exception& e) {
          res = {500, json{{"error", e.what()}}};
        }
        net::post(self->stream_.get_executor(), [self, res = std::move(res)] { self->respond(res.status, res.body); });
      });
    }

    void respond(int status, const json& body) {
      auto res = std::make_shared<http::response<http::string_body>>(static_cast<http::status>(status), req_.version());
      res->set(http::field::server, "navcon");
      res->set(http::field::access_control_allow_origin, "*");
      res->set(http::field::access_control_allow_headers, "Content-Type");
      res->set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
      if (!body.is_null()) {
        res->set(http::field::content_type, "application/json");
        res->body() = body.dump();
      }
      res->keep_alive(req_.keep_alive());
      res->prepare_payload();
      http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
        if (ec || !res->keep_alive()) return self->close();
        self->read();
      });
    }

    void close() {
      beast::error_code ec;
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
    }

    beast::tcp_stream stream_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> req_;
    Server& server_;
  };

  class WsSession : public std::enable_shared_from_this<WsSession> {
   public:
    WsSession(tcp::socket socket, Server& server) : ws_(std::move(socket)), server_(server) {}

    void run(http::request<http::string_body> req) {
      const auto t = detail::split_target(std::string(req.target()));
      if (const auto it = t.query.find("scene"); it != t.query.end()) scene_ = it->second;
      ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
      ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
        if (ec) return;
        self->server_.subscribe(self);
        self->read();
      });
    }

    void send(const std::string& scene, std::shared_ptr<const std::string> msg) {
      if (!scene_.empty() && scene_ != scene) return;
      net::post(ws_.get_executor(), [self = shared_from_this(), msg = std::move(msg)] {
        self->queue_.push_back(msg);
        if (self->queue_.size() == 1) self->write();
      });
    }

   private:
    void read() {
      ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
        if (ec) return;
        self->buffer_.consume(self->buffer_.size());
        self->read();
      });
    }

    void write() {
      ws_.text(true);
      ws_.async_write(net::buffer(*queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
        if (ec) return;
        self->queue_.pop_front();
        if (!self->queue_.empty()) self->write();
      });
    }

    websocket::stream<beast::tcp_stream> ws_;
    beast::flat_buffer buffer_;
    std::deque<std::shared_ptr<const std::string>> queue_;
    std::string scene_;
    Server& server_;
  };

  void accept() {
    acceptor_.async_accept(net::make_strand(ioc_), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<HttpSession>(std::move(socket), *this)->run();
      accept();
    });
  }

  void subscribe(const std::shared_ptr<WsSession>& s) {
    std::lock_guard lock(ws_mutex_);
    subscribers_.push_back(s);
  }

  void broadcast(const std::string& scene, const json& msg) {
    auto text = std::make_shared<const std::string>(msg.dump());
    std::lock_guard lock(ws_mutex_);
    std::erase_if(subscribers_, [](const auto& w) { return w.expired(); });
    for (const auto& w : subscribers_)
      if (auto s = w.lock()) s->send(scene, text);
  }

  struct Playback {
    Playback(net::io_context& ioc, std::string s, std::vector<pipeline::FollowEvent> e, std::function<void()> r)
        : timer(ioc), scene(std::move(s)), events(std::move(e)), release(std::move(r)) {}
    net::steady_timer timer;
    std::string scene;
    std::vector<pipeline::FollowEvent> events;
    std::function<void()> release;
    std::size_t next = 0;
  };

  void play(const std::string& scene, std::vector<pipeline::FollowEvent> events, std::function<void()> release) {
    auto pb = std::make_shared<Playback>(ioc_, scene, std::move(events), std::move(release));
    net::post(ioc_, [this, pb] { step(pb); });
  }

  void step(const std::shared_ptr<Playback>& pb) {
    broadcast(pb->scene, event_json(pb->scene, pb->events[pb->next]));
    if (++pb->next == pb->events.size()) return pb->release();
    pb->timer.expires_after(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(cfg_.event_period_s)));
    pb->timer.async_wait([this, pb](beast::error_code ec) {
      if (ec) return pb->release();
      step(pb);
    });
  }

  SessionHub& hub_;
  ServerConfig cfg_;
  net::io_context ioc_;
  tcp::acceptor acceptor_;
  net::thread_pool workers_;
  std::vector<std::thread> threads_;
  std::mutex ws_mutex_;
  std::vector<std::weak_ptr<WsSession>> subscribers_;
  bool stopped_ = false;
};

}  // namespace navcon::service
