#pragma once

// HTTP + WebSocket transport for SessionRegistry.
//
//   POST   /sessions          -> 201 {"id": "<session id>"}
//   DELETE /sessions/{id}     -> 204, or 404 for an unknown id
//   GET    /sessions/{id}/ws  -> WebSocket upgrade; text frames carry JSON
//                                commands, each answered by one reply
//
// A snapshot is pushed as soon as the WebSocket opens. Built on Boost.Beast
// with a single io thread, so all handlers run serially.

#include "session.hpp"

#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <json.hpp>

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <thread>

namespace qubitgeo {

namespace net_detail {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

//! Splits "/sessions/{id}" and "/sessions/{id}/ws"; returns the id.
inline std::optional<std::string> session_id_from_target(std::string_view target,
                                                         bool websocket_path) {
  constexpr std::string_view prefix = "/sessions/";
  if (!target.starts_with(prefix))
    return std::nullopt;
  target.remove_prefix(prefix.size());
  if (websocket_path) {
    constexpr std::string_view suffix = "/ws";
    if (!target.ends_with(suffix))
      return std::nullopt;
    target.remove_suffix(suffix.size());
  }
  if (target.empty() || target.find('/') != std::string_view::npos)
    return std::nullopt;
  return std::string(target);
}

class WebSocketSession : public std::enable_shared_from_this<WebSocketSession> {
public:
  WebSocketSession(tcp::socket &&socket, SessionRegistry &registry, std::string id)
      : ws_(std::move(socket)), registry_(registry), id_(std::move(id)) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, beast::bind_front_handler(&WebSocketSession::on_accept,
                                                    shared_from_this()));
  }

private:
  void on_accept(beast::error_code ec) {
    if (ec)
      return;
    reply(nlohmann::json{{"type", "snapshot"}});
  }

  void reply(const nlohmann::json &message) {
    auto answer = registry_.handle(id_, message);
    if (!answer) {
      closing_ = true;
      answer = error_message(std::nullopt, "no_session", "session " + id_ + " is gone");
    }
    out_ = answer->dump();
    ws_.text(true);
    ws_.async_write(boost::asio::buffer(out_),
                    beast::bind_front_handler(&WebSocketSession::on_write,
                                              shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec)
      return;
    if (closing_) {
      ws_.async_close(websocket::close_code::going_away,
                      [self = shared_from_this()](beast::error_code) {});
      return;
    }
    ws_.async_read(buffer_, beast::bind_front_handler(&WebSocketSession::on_read,
                                                      shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec)
      return;
    const auto text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    auto message = nlohmann::json::parse(text, nullptr, false);
    if (message.is_discarded()) {
      out_ = error_message(std::nullopt, "bad_message", "invalid JSON").dump();
      ws_.text(true);
      ws_.async_write(boost::asio::buffer(out_),
                      beast::bind_front_handler(&WebSocketSession::on_write,
                                                shared_from_this()));
      return;
    }
    reply(message);
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  SessionRegistry &registry_;
  std::string id_;
  std::string out_;
  bool closing_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
  HttpSession(tcp::socket &&socket, SessionRegistry &registry)
      : stream_(std::move(socket)), registry_(registry) {}

  void run() {
    boost::asio::dispatch(stream_.get_executor(),
                          beast::bind_front_handler(&HttpSession::do_read,
                                                    shared_from_this()));
  }

private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  std::string_view target() const {
    const auto t = req_.target();
    return {t.data(), t.size()};
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (ec)
      return;

    if (websocket::is_upgrade(req_)) {
      const auto id = session_id_from_target(target(), true);
      if (id && registry_.contains(*id)) {
        stream_.expires_never();
        std::make_shared<WebSocketSession>(stream_.release_socket(), registry_, *id)
            ->run(std::move(req_));
        return;
      }
    }
    res_ = std::make_shared<http::response<http::string_body>>(respond());
    http::async_write(stream_, *res_,
                      beast::bind_front_handler(&HttpSession::on_write, shared_from_this(),
                                                res_->need_eof()));
  }

  http::response<http::string_body> respond() {
    auto make = [&](http::status status, std::string body) {
      http::response<http::string_body> res{status, req_.version()};
      res.set(http::field::content_type, "application/json");
      res.set(http::field::access_control_allow_origin, "*");
      res.keep_alive(req_.keep_alive());
      res.body() = std::move(body);
      res.prepare_payload();
      return res;
    };
    const std::string_view path = target();
    if (req_.method() == http::verb::options) {
      auto res = make(http::status::no_content, "");
      res.set(http::field::access_control_allow_methods, "POST, DELETE, OPTIONS");
      return res;
    }
    if (req_.method() == http::verb::post && path == "/sessions") {
      const auto id = registry_.create();
      return make(http::status::created, nlohmann::json{{"id", id}}.dump());
    }
    if (req_.method() == http::verb::delete_) {
      const auto id = session_id_from_target(path, false);
      if (id && registry_.remove(*id))
        return make(http::status::no_content, "");
    }
    return make(http::status::not_found,
                error_message(std::nullopt, "not_found", "no such resource").dump());
  }

  void on_write(bool close, beast::error_code ec, std::size_t) {
    if (ec)
      return;
    if (close) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    res_.reset();
    do_read();
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  std::shared_ptr<http::response<http::string_body>> res_;
  SessionRegistry &registry_;
};

class Listener : public std::enable_shared_from_this<Listener> {
public:
  Listener(net::io_context &ioc, tcp::endpoint endpoint, SessionRegistry &registry)
      : ioc_(ioc), acceptor_(net::make_strand(ioc)), registry_(registry) {
    acceptor_.open(endpoint.protocol());
    acceptor_.set_option(net::socket_base::reuse_address(true));
    acceptor_.bind(endpoint);
    acceptor_.listen(net::socket_base::max_listen_connections);
  }

  unsigned short port() const { return acceptor_.local_endpoint().port(); }

  void run() { do_accept(); }

private:
  void do_accept() {
    acceptor_.async_accept(net::make_strand(ioc_),
                           beast::bind_front_handler(&Listener::on_accept,
                                                     shared_from_this()));
  }

  void on_accept(beast::error_code ec, tcp::socket socket) {
    if (!ec)
      std::make_shared<HttpSession>(std::move(socket), registry_)->run();
    if (acceptor_.is_open())
      do_accept();
  }

  net::io_context &ioc_;
  tcp::acceptor acceptor_;
  SessionRegistry &registry_;
};

} // namespace net_detail

//! Session server bound at construction; port 0 picks a free port.
class SessionServer {
public:
  SessionServer(SessionRegistry &registry, const std::string &address,
                unsigned short port)
      : ioc_(1),
        listener_(std::make_shared<net_detail::Listener>(
            ioc_,
            net_detail::tcp::endpoint(boost::asio::ip::make_address(address), port),
            registry)) {
    listener_->run();
  }

  ~SessionServer() { stop(); }

  SessionServer(const SessionServer &) = delete;
  SessionServer &operator=(const SessionServer &) = delete;

  unsigned short port() const { return listener_->port(); }

  //! Serves on the calling thread until stop().
  void run() { ioc_.run(); }

  //! Serves on a background thread.
  void start() {
    thread_ = std::thread([this] { ioc_.run(); });
  }

  void stop() {
    ioc_.stop();
    if (thread_.joinable())
      thread_.join();
  }

private:
  boost::asio::io_context ioc_;
  std::shared_ptr<net_detail::Listener> listener_;
  std::thread thread_;
};

} // namespace qubitgeo
