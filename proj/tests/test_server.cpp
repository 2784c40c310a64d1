// Live HTTP + WebSocket round trips against SessionServer on a free port.

#include "oracle.hpp"

#include <qubitgeo/server.hpp>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <gtest/gtest.h>
#include <json.hpp>

#include <string>

using namespace qubitgeo;
using nlohmann::json;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

namespace {

class ServerTest : public ::testing::Test {
protected:
  void SetUp() override {
    server_ = std::make_unique<SessionServer>(registry_, "127.0.0.1", 0);
    server_->start();
  }
  void TearDown() override { server_->stop(); }

  http::response<http::string_body> request(http::verb verb, const std::string &target) {
    net::io_context ioc;
    tcp::resolver resolver(ioc);
    beast::tcp_stream stream(ioc);
    stream.connect(resolver.resolve("127.0.0.1", std::to_string(server_->port())));
    http::request<http::string_body> req{verb, target, 11};
    req.set(http::field::host, "127.0.0.1");
    req.prepare_payload();
    http::write(stream, req);
    beast::flat_buffer buffer;
    http::response<http::string_body> res;
    http::read(stream, buffer, res);
    beast::error_code ec;
    stream.socket().shutdown(tcp::socket::shutdown_both, ec);
    return res;
  }

  std::string create_session() {
    const auto res = request(http::verb::post, "/sessions");
    EXPECT_EQ(res.result(), http::status::created);
    return json::parse(res.body()).at("id").get<std::string>();
  }

  SessionRegistry registry_;
  std::unique_ptr<SessionServer> server_;
};

class WsClient {
public:
  WsClient(unsigned short port, const std::string &id) : ws_(ioc_) {
    tcp::resolver resolver(ioc_);
    net::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
    ws_.handshake("127.0.0.1", "/sessions/" + id + "/ws");
  }

  json receive() {
    beast::flat_buffer buffer;
    ws_.read(buffer);
    return json::parse(beast::buffers_to_string(buffer.data()));
  }

  json send(const json &msg) { return send_text(msg.dump()); }

  json send_text(const std::string &text) {
    ws_.write(net::buffer(text));
    return receive();
  }

  void close() { ws_.close(websocket::close_code::normal); }

private:
  net::io_context ioc_;
  websocket::stream<tcp::socket> ws_;
};

// Independent readouts for a state: s, r and the reduced matrices.
void expect_readouts(const json &snap, const oracle::V4 &want_state) {
  ASSERT_EQ(snap.at("type"), "snapshot") << snap.dump();
  const auto &ro = snap.at("readouts");
  const auto v = ro.at("state").get<oracle::V4>();
  EXPECT_LT(oracle::ray_distance(v, want_state), 1e-9);
  const double s = want_state[0] * want_state[3] - want_state[1] * want_state[2];
  EXPECT_NEAR(ro.at("s").get<double>(), s, 1e-9);
  EXPECT_NEAR(ro.at("r").get<double>(), oracle::radius_of_s(s), 1e-9);
  const auto full = oracle::outer(want_state);
  for (int q : {1, 2}) {
    const auto m = oracle::reduce(full, q);
    const auto &rho = ro.at("rho" + std::to_string(q));
    EXPECT_NEAR(rho.at("p_top").get<double>(), m[0][0], 1e-9);
    EXPECT_NEAR(rho.at("c").get<double>(), m[0][1], 1e-9);
    EXPECT_NEAR(rho.at("p_bot").get<double>(), m[1][1], 1e-9);
  }
}

// (s, theta1, theta2) -> state via R(theta1) (x) R(theta2) on chi0(s).
oracle::V4 from_params(double s, double t1, double t2) {
  const double r = oracle::radius_of_s(s);
  const oracle::V4 chi0{std::sqrt(0.5 + r), 0, 0, (s < 0 ? -1 : 1) * std::sqrt(0.5 - r)};
  return oracle::apply(oracle::kron(oracle::rot(t1), oracle::rot(t2)), chi0);
}

} // namespace

TEST_F(ServerTest, CreateAndDeleteSessions) {
  const auto id = create_session();
  EXPECT_TRUE(registry_.contains(id));
  EXPECT_EQ(request(http::verb::delete_, "/sessions/" + id).result(), http::status::no_content);
  EXPECT_FALSE(registry_.contains(id));
  EXPECT_EQ(request(http::verb::delete_, "/sessions/" + id).result(), http::status::not_found);
  EXPECT_EQ(request(http::verb::get, "/nowhere").result(), http::status::not_found);
}

TEST_F(ServerTest, CorsPreflight) {
  const auto res = request(http::verb::options, "/sessions");
  EXPECT_EQ(res.result(), http::status::no_content);
  EXPECT_EQ(res[http::field::access_control_allow_origin], "*");
}

TEST_F(ServerTest, ScriptedReplay) {
  const auto id = create_session();
  WsClient ws(server_->port(), id);

  const auto initial = ws.receive();
  expect_readouts(initial, {1, 0, 0, 0});
  EXPECT_EQ(initial.at("session"), id);

  const double s = 0.3, t1 = 1.1, t2 = -0.4;
  const auto after_params =
      ws.send({{"type", "set_params"}, {"seq", 1}, {"s", s}, {"theta1", t1}, {"theta2", t2}});
  const auto chi = from_params(s, t1, t2);
  expect_readouts(after_params, chi);
  EXPECT_EQ(after_params.at("in_reply_to"), 1);
  EXPECT_NEAR(after_params.at("readouts").at("theta1").get<double>(), t1, 1e-9);
  EXPECT_NEAR(after_params.at("readouts").at("theta2").get<double>(), t2, 1e-9);

  const auto after_gate = ws.send({{"type", "apply_gate"}, {"seq", 2}, {"token", "CNOT12"}});
  expect_readouts(after_gate, oracle::apply(oracle::cnot12(), chi));

  const auto after_h = ws.send({{"type", "apply_gate"}, {"seq", 3}, {"token", "H2"}});
  expect_readouts(after_h, oracle::apply(oracle::gate("H2"), oracle::apply(oracle::cnot12(), chi)));

  const auto undone = ws.send({{"type", "undo"}, {"seq", 4}});
  expect_readouts(undone, oracle::apply(oracle::cnot12(), chi));
  EXPECT_EQ(undone.at("readouts"), after_gate.at("readouts"));
  EXPECT_EQ(undone.at("toroid"), after_gate.at("toroid"));

  std::int64_t last = 0;
  for (const auto *snap : {&initial, &after_params, &after_gate, &after_h, &undone}) {
    EXPECT_GT(snap->at("seq").get<std::int64_t>(), last);
    last = snap->at("seq").get<std::int64_t>();
  }
  ws.close();
}

TEST_F(ServerTest, BellPreparationOverTheWire) {
  WsClient ws(server_->port(), create_session());
  ws.receive();
  ws.send({{"type", "apply_gate"}, {"seq", 1}, {"token", "H1"}});
  const auto bell = ws.send({{"type", "apply_gate"}, {"seq", 2}, {"token", "CNOT12"}});
  expect_readouts(bell, {oracle::h, 0, 0, oracle::h});
  EXPECT_EQ(bell.at("readouts").at("kind"), "knot");
  bool has_knot = false;
  for (const auto &p : bell.at("toroid").at("primitives"))
    has_knot = has_knot || (p.at("id") == "knot" && p.at("kind") == "polyline");
  EXPECT_TRUE(has_knot);
}

TEST_F(ServerTest, ErrorsAreStructuredAndAtomic) {
  WsClient ws(server_->port(), create_session());
  ws.receive();
  const auto good = ws.send({{"type", "set_params"}, {"seq", 1}, {"s", -0.2}, {"theta1", 2.0}, {"theta2", 0.5}});

  const auto bad_gate = ws.send({{"type", "apply_gate"}, {"seq", 2}, {"token", "T1"}});
  EXPECT_EQ(bad_gate.at("type"), "error");
  EXPECT_EQ(bad_gate.at("code"), "bad_gate");
  EXPECT_EQ(bad_gate.at("seq"), 2);

  const auto bad_vec = ws.send({{"type", "set_state"}, {"seq", 3}, {"vector", {0, 0, 0, 0}}});
  EXPECT_EQ(bad_vec.at("code"), "bad_vector");

  const auto bad_json = ws.send_text("{not json");
  EXPECT_EQ(bad_json.at("type"), "error");
  EXPECT_EQ(bad_json.at("code"), "bad_message");

  const auto snap = ws.send({{"type", "snapshot"}, {"seq", 4}});
  EXPECT_EQ(snap.at("readouts"), good.at("readouts"));
  EXPECT_EQ(snap.at("seq").get<int>(), good.at("seq").get<int>() + 1);
}

TEST_F(ServerTest, SessionsAreIndependent) {
  WsClient a(server_->port(), create_session());
  WsClient b(server_->port(), create_session());
  a.receive();
  b.receive();
  a.send({{"type", "apply_gate"}, {"seq", 1}, {"token", "X1"}});
  const auto snap_b = b.send({{"type", "snapshot"}, {"seq", 1}});
  expect_readouts(snap_b, {1, 0, 0, 0});
  EXPECT_EQ(snap_b.at("seq"), 2);
}

TEST_F(ServerTest, UnknownSessionRejectsUpgrade) {
  EXPECT_THROW(WsClient(server_->port(), "0000000000000000"), beast::system_error);
}

TEST_F(ServerTest, DeletedSessionClosesTheSocket) {
  const auto id = create_session();
  WsClient ws(server_->port(), id);
  ws.receive();
  request(http::verb::delete_, "/sessions/" + id);
  const auto reply = ws.send({{"type", "snapshot"}, {"seq", 5}});
  EXPECT_EQ(reply.at("type"), "error");
  EXPECT_EQ(reply.at("code"), "no_session");
  EXPECT_THROW(ws.receive(), beast::system_error);
}
