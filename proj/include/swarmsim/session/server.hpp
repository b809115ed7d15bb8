#pragma once

// Network front end of the session service. Everything runs on one
// io_context thread, so Session objects are never touched concurrently.

#include <chrono>
#include <deque>
#include <functional>
#include <memory>
#include <set>
#include <string>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "swarmsim/session/session.hpp"

namespace swarmsim::session {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

struct ServerState {
  SessionManager &manager;
  std::set<std::string> attached;  // sessions with a live client
  std::function<void(const std::string &)> log = [](const std::string &) {};

  void note(const std::string &line) const {
    if (log) log(line);
  }
};

namespace detail {

/// Query parameter `key` of a request target, or empty.
inline std::string query_param(std::string_view target, std::string_view key) {
  const auto q = target.find('?');
  if (q == std::string_view::npos) return {};
  auto rest = target.substr(q + 1);
  while (!rest.empty()) {
    const auto amp = rest.find('&');
    const auto pair = amp == std::string_view::npos ? rest : rest.substr(0, amp);
    const auto eq = pair.find('=');
    if (eq != std::string_view::npos && pair.substr(0, eq) == key) return std::string(pair.substr(eq + 1));
    if (amp == std::string_view::npos) break;
    rest = rest.substr(amp + 1);
  }
  return {};
}

inline std::string_view path_of(std::string_view target) { return target.substr(0, target.find('?')); }

}  // namespace detail

class SocketSession : public std::enable_shared_from_this<SocketSession> {
 public:
  static constexpr std::size_t kMaxQueuedSnapshots = 2;

  SocketSession(tcp::socket &&socket, ServerState &state, Session &session)
      : ws_(std::move(socket)), timer_(ws_.get_executor()), state_(state), session_(session) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return close();
    ws_.text(true);
    push(session_.on_connect());
    do_read();
  }

  void do_read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
  }

  void on_read(beast::error_code ec) {
    if (ec) return close();
    const bool was_running = session_.running();
    push(session_.on_message(beast::buffers_to_string(buffer_.data())));
    buffer_.consume(buffer_.size());
    if (!was_running && session_.running()) start_ticking();
    do_read();
  }

  void start_ticking() {
    next_tick_ = std::chrono::steady_clock::now() + std::chrono::milliseconds(100);
    schedule();
  }

  void schedule() {
    timer_.expires_at(next_tick_);
    timer_.async_wait([self = shared_from_this()](beast::error_code ec) { self->on_timer(ec); });
  }

  void on_timer(beast::error_code ec) {
    if (ec || closed_) return;
    push(session_.on_tick(std::chrono::steady_clock::now()));
    if (!session_.running()) return;
    // absolute deadlines: a late tick does not push back the ones after it
    next_tick_ += std::chrono::milliseconds(100);
    schedule();
  }

  void push(std::vector<Outbound> msgs) {
    for (auto &m : msgs) {
      if (m.droppable) {
        std::size_t queued = 0;
        for (std::size_t i = writing_ ? 1 : 0; i < queue_.size(); ++i) queued += queue_[i].droppable ? 1 : 0;
        if (queued >= kMaxQueuedSnapshots) {
          for (auto it = queue_.begin() + (writing_ ? 1 : 0); it != queue_.end(); ++it) {
            if (it->droppable) {
              queue_.erase(it);
              break;
            }
          }
        }
      }
      queue_.push_back(std::move(m));
    }
    if (!writing_) do_write();
  }

  void do_write() {
    if (queue_.empty() || closed_) return;
    writing_ = true;
    ws_.async_write(net::buffer(queue_.front().text), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->writing_ = false;
      if (ec) return self->close();
      self->queue_.pop_front();
      self->do_write();
    });
  }

  void close() {
    if (closed_) return;
    closed_ = true;
    timer_.cancel();
    session_.on_disconnect();
    state_.attached.erase(session_.id());
    state_.note("client left session " + session_.id());
    beast::error_code ignored;
    beast::get_lowest_layer(ws_).socket().close(ignored);
  }

  websocket::stream<beast::tcp_stream> ws_;
  net::steady_timer timer_;
  ServerState &state_;
  Session &session_;
  beast::flat_buffer buffer_;
  std::deque<Outbound> queue_;
  bool writing_ = false;
  bool closed_ = false;
  std::chrono::steady_clock::time_point next_tick_;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket &&socket, ServerState &state) : stream_(std::move(socket)), state_(state) {}

  void run() { do_read(); }

 private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
  }

  void on_read(beast::error_code ec) {
    if (ec) return;
    if (websocket::is_upgrade(req_)) return upgrade();
    auto res = std::make_shared<http::response<http::string_body>>(handle());
    res->version(req_.version());
    res->keep_alive(req_.keep_alive());
    res->set(http::field::access_control_allow_origin, "*");
    res->prepare_payload();
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
      if (ec || !res->keep_alive()) {
        beast::error_code ignored;
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
        return;
      }
      self->do_read();
    });
  }

  void upgrade() {
    const auto target = std::string_view(req_.target().data(), req_.target().size());
    if (detail::path_of(target) != "/session") return reject(http::status::not_found, "unknown socket endpoint");
    const auto id = detail::query_param(target, "id");
    Session *s = state_.manager.find(id);
    if (!s) return reject(http::status::not_found, "unknown session");
    if (state_.attached.contains(id)) return reject(http::status::conflict, "session already has a client");
    state_.attached.insert(id);
    state_.note("client joined session " + id);
    stream_.expires_never();
    std::make_shared<SocketSession>(stream_.release_socket(), state_, *s)->run(std::move(req_));
  }

  void reject(http::status status, const std::string &why) {
    auto res = std::make_shared<http::response<http::string_body>>(status, req_.version());
    res->set(http::field::content_type, "application/json");
    res->body() = json{{"error", why}}.dump();
    res->prepare_payload();
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
      beast::error_code ignored;
      self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
    });
  }

  http::response<http::string_body> reply(http::status status, const json &body) {
    http::response<http::string_body> res{status, req_.version()};
    res.set(http::field::content_type, "application/json");
    res.body() = body.dump();
    return res;
  }

  http::response<http::string_body> handle() {
    const auto target = std::string(req_.target());
    const auto path = std::string(detail::path_of(target));
    if (req_.method() == http::verb::options) {
      http::response<http::string_body> res{http::status::no_content, req_.version()};
      res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
      res.set(http::field::access_control_allow_headers, "Content-Type");
      return res;
    }
    if (req_.method() == http::verb::post && path == "/sessions") {
      const auto body = json::parse(req_.body(), nullptr, false);
      if (body.is_discarded()) return reply(http::status::bad_request, {{"error", "body is not JSON"}});
      try {
        const auto id = state_.manager.create(body);
        const Session *s = state_.manager.find(id);
        state_.note("created session " + id);
        return reply(http::status::created, {{"session_id", id}, {"rounds", s->plan().size()}});
      } catch (const ProtocolError &e) {
        return reply(http::status::bad_request, {{"error", e.what()}});
      }
    }
    constexpr std::string_view prefix = "/sessions/";
    constexpr std::string_view suffix = "/export";
    if (req_.method() == http::verb::get && path.starts_with(prefix) && path.ends_with(suffix) &&
        path.size() > prefix.size() + suffix.size()) {
      const auto id = path.substr(prefix.size(), path.size() - prefix.size() - suffix.size());
      if (Session *s = state_.manager.find(id)) return reply(http::status::ok, s->export_bundle());
      return reply(http::status::not_found, {{"error", "unknown session"}});
    }
    return reply(http::status::not_found, {{"error", "no such endpoint"}});
  }

  beast::tcp_stream stream_;
  ServerState &state_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
};

class Listener : public std::enable_shared_from_this<Listener> {
 public:
  Listener(net::io_context &ioc, tcp::endpoint endpoint, ServerState &state)
      : ioc_(ioc), acceptor_(ioc), state_(state) {
    acceptor_.open(endpoint.protocol());
    acceptor_.set_option(net::socket_base::reuse_address(true));
    acceptor_.bind(endpoint);
    acceptor_.listen(net::socket_base::max_listen_connections);
  }

  [[nodiscard]] unsigned short port() const { return acceptor_.local_endpoint().port(); }

  void run() { do_accept(); }
  void stop() {
    beast::error_code ignored;
    acceptor_.close(ignored);
  }

 private:
  void do_accept() {
    acceptor_.async_accept(ioc_, [self = shared_from_this()](beast::error_code ec, tcp::socket socket) {
      if (ec == net::error::operation_aborted) return;
      if (!ec) std::make_shared<HttpSession>(std::move(socket), self->state_)->run();
      self->do_accept();
    });
  }

  net::io_context &ioc_;
  tcp::acceptor acceptor_;
  ServerState &state_;
};

}  // namespace swarmsim::session
