#pragma once

// Explorer session state and its JSON command protocol. Transport-free: the
// server feeds decoded messages to Session::handle and sends back the reply.
//
// Commands (client -> server), each with "type" and "seq":
//   set_state  {vector: [a, b, c, d]}
//   set_params {s, theta1, theta2}
//   set_knot   {surface: "+" | "-", xi}
//   apply_gate {token}
//   set_basis  {qubit: 1 | 2, angle}
//   set_toroid {config: {major_radius, separable_tube_radius}}
//   undo, snapshot
// Replies are full snapshots ({"type": "snapshot", "seq": n, ...}, n strictly
// increasing per session) or errors ({"type": "error", "seq": <command seq>,
// "code", "message"}). A failed command leaves the session untouched.

#include "bloch_geometry.hpp"
#include "core_states.hpp"
#include "gates.hpp"
#include "scene.hpp"
#include "toroid.hpp"
#include "twoqubit_mapping.hpp"

#include <json.hpp>

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>

namespace qubitgeo {

inline constexpr std::size_t kHistoryCap = 256;

//! Protocol-level failure with a machine-readable code such as bad_vector,
//! bad_params, bad_gate, bad_basis, bad_config, empty_history, bad_command or
//! bad_message.
class ProtocolError : public std::runtime_error {
public:
  ProtocolError(std::string code, const std::string &message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string &code() const noexcept { return code_; }

private:
  std::string code_;
};

namespace cmd {
struct SetState { Amplitudes4 vector; };
struct SetParams { double s; double theta1; double theta2; };
struct SetKnot { Surface surface; double xi; };
struct ApplyGate { std::string token; };
struct SetBasis { int qubit; double angle; };
struct SetToroid { ToroidConfig config; };
struct Undo {};
struct Snapshot {};
} // namespace cmd

using Command = std::variant<cmd::SetState, cmd::SetParams, cmd::SetKnot, cmd::ApplyGate,
                             cmd::SetBasis, cmd::SetToroid, cmd::Undo, cmd::Snapshot>;

namespace detail {

inline double finite_number(const nlohmann::json &msg, const char *key,
                            const char *code) {
  const auto it = msg.find(key);
  if (it == msg.end() || !it->is_number())
    throw ProtocolError(code, std::string("missing numeric field '") + key + "'");
  const double v = it->get<double>();
  if (!std::isfinite(v))
    throw ProtocolError(code, std::string("field '") + key + "' is not finite");
  return v;
}

} // namespace detail

inline Command parse_command(const nlohmann::json &msg) {
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string())
    throw ProtocolError("bad_message", "message must be an object with a string 'type'");
  const auto type = msg["type"].get<std::string>();

  if (type == "set_state") {
    const auto it = msg.find("vector");
    if (it == msg.end() || !it->is_array() || it->size() != 4)
      throw ProtocolError("bad_vector", "vector must be an array of 4 numbers");
    Amplitudes4 v{};
    for (std::size_t i = 0; i < 4; ++i) {
      if (!(*it)[i].is_number() || !std::isfinite((*it)[i].get<double>()))
        throw ProtocolError("bad_vector", "vector entries must be finite numbers");
      v[i] = (*it)[i].get<double>();
    }
    return cmd::SetState{v};
  }
  if (type == "set_params")
    return cmd::SetParams{detail::finite_number(msg, "s", "bad_params"),
                          detail::finite_number(msg, "theta1", "bad_params"),
                          detail::finite_number(msg, "theta2", "bad_params")};
  if (type == "set_knot") {
    const auto it = msg.find("surface");
    Surface surface;
    if (it != msg.end() && it->is_string() && (*it == "+" || *it == "-"))
      surface = *it == "+" ? Surface::Outer : Surface::Inner;
    else if (it != msg.end() && it->is_number_integer() && std::abs(it->get<int>()) == 1)
      surface = it->get<int>() > 0 ? Surface::Outer : Surface::Inner;
    else
      throw ProtocolError("bad_params", "surface must be \"+\" or \"-\"");
    return cmd::SetKnot{surface, detail::finite_number(msg, "xi", "bad_params")};
  }
  if (type == "apply_gate") {
    const auto it = msg.find("token");
    if (it == msg.end() || !it->is_string())
      throw ProtocolError("bad_gate", "token must be a string");
    return cmd::ApplyGate{it->get<std::string>()};
  }
  if (type == "set_basis") {
    const auto it = msg.find("qubit");
    if (it == msg.end() || !it->is_number_integer() ||
        (it->get<int>() != 1 && it->get<int>() != 2))
      throw ProtocolError("bad_basis", "qubit must be 1 or 2");
    return cmd::SetBasis{it->get<int>(), detail::finite_number(msg, "angle", "bad_basis")};
  }
  if (type == "set_toroid") {
    const auto it = msg.find("config");
    if (it == msg.end())
      throw ProtocolError("bad_config", "missing 'config'");
    try {
      return cmd::SetToroid{toroid_config_from_json(*it)};
    } catch (const Error &e) {
      throw ProtocolError("bad_config", e.what());
    }
  }
  if (type == "undo")
    return cmd::Undo{};
  if (type == "snapshot")
    return cmd::Snapshot{};
  throw ProtocolError("bad_command", "unknown command type '" + type + "'");
}

//! Numbers shown next to the panels, all derived from `state`.
struct Readouts {
  TwoQubitReal state;
  ParamsOrKnot params;
  double s = 0.0;
  double r = 0.5;
  DensityMatrixReal rho1, rho2;
  BasisAxis basis1, basis2;
  MeasurementProbs probs1, probs2;
};

inline Readouts compute_readouts(const TwoQubitReal &chi, BasisAxis basis1,
                                 BasisAxis basis2) {
  Readouts out;
  out.state = chi;
  out.params = params_from_state(chi);
  out.s = entanglement_s(chi);
  out.r = radius_from_s(out.s);
  out.rho1 = reduced_density(chi, 1);
  out.rho2 = reduced_density(chi, 2);
  out.basis1 = basis1;
  out.basis2 = basis2;
  out.probs1 = measurement_probs(out.rho1, basis1);
  out.probs2 = measurement_probs(out.rho2, basis2);
  return out;
}

inline nlohmann::json to_json(const DensityMatrixReal &rho) {
  return {{"p_top", rho.p_top()}, {"c", rho.c()}, {"p_bot", rho.p_bot()}};
}

inline nlohmann::json to_json(const Readouts &r) {
  nlohmann::json j;
  const auto &v = r.state.amplitudes();
  j["state"] = {v[0], v[1], v[2], v[3]};
  j["s"] = r.s;
  j["r"] = r.r;
  if (const auto *g = std::get_if<GeometricParams>(&r.params)) {
    j["kind"] = "regular";
    j["theta1"] = g->theta1.value();
    j["theta2"] = g->theta2.value();
  } else {
    const auto &k = std::get<KnotDescriptor>(r.params);
    j["kind"] = "knot";
    j["surface"] = std::string(1, symbol_of(k.surface));
    j["xi"] = k.xi.value();
  }
  j["rho1"] = to_json(r.rho1);
  j["rho2"] = to_json(r.rho2);
  j["basis1"] = r.basis1.axis_angle.value();
  j["basis2"] = r.basis2.axis_angle.value();
  j["probs1"] = {r.probs1.p0, r.probs1.p1};
  j["probs2"] = {r.probs2.p0, r.probs2.p1};
  return j;
}

struct SnapshotMessage {
  std::string session;
  std::uint64_t seq = 0;
  std::optional<std::int64_t> in_reply_to;
  Readouts readouts;
  ToroidConfig toroid_config;
  std::size_t history_depth = 0;
  Scene toroid;
  Scene bloch1;
  Scene bloch2;
};

inline nlohmann::json to_json(const SnapshotMessage &m) {
  nlohmann::json j;
  j["type"] = "snapshot";
  j["seq"] = m.seq;
  j["session"] = m.session;
  j["in_reply_to"] = m.in_reply_to ? nlohmann::json(*m.in_reply_to) : nlohmann::json();
  j["readouts"] = to_json(m.readouts);
  j["toroid_config"] = to_json(m.toroid_config);
  j["history_depth"] = m.history_depth;
  j["toroid"] = to_json(m.toroid);
  j["bloch1"] = to_json(m.bloch1);
  j["bloch2"] = to_json(m.bloch2);
  return j;
}

inline nlohmann::json error_message(std::optional<std::int64_t> seq,
                                    const std::string &code,
                                    const std::string &message) {
  return {{"type", "error"},
          {"seq", seq ? nlohmann::json(*seq) : nlohmann::json()},
          {"code", code},
          {"message", message}};
}

//! One explorer session. Not internally synchronized; SessionRegistry
//! serializes access.
class Session {
public:
  explicit Session(std::string id, ToroidConfig cfg = {})
      : id_(std::move(id)), toroid_(cfg) {}

  const std::string &id() const { return id_; }
  const TwoQubitReal &state() const { return state_; }
  BasisAxis basis(int qubit) const { return qubit == 1 ? basis1_ : basis2_; }
  const ToroidConfig &toroid_config() const { return toroid_; }
  std::size_t history_depth() const { return history_.size(); }
  std::uint64_t last_seq() const { return seq_; }

  //! Applies `command` and returns the new snapshot. Throws ProtocolError and
  //! leaves every field unchanged on failure.
  SnapshotMessage apply(const Command &command,
                        std::optional<std::int64_t> in_reply_to = std::nullopt) {
    TwoQubitReal next_state = state_;
    BasisAxis next_b1 = basis1_, next_b2 = basis2_;
    ToroidConfig next_cfg = toroid_;
    bool push_history = false;
    bool pop_history = false;

    std::visit(
        [&](const auto &c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, cmd::SetState>) {
            try {
              next_state = normalize_phase(c.vector);
            } catch (const Error &e) {
              throw ProtocolError("bad_vector", e.what());
            }
            push_history = true;
          } else if constexpr (std::is_same_v<T, cmd::SetParams>) {
            try {
              next_state = state_from_params(c.s, Angle(c.theta1), Angle(c.theta2));
            } catch (const Error &e) {
              throw ProtocolError("bad_params", e.what());
            }
            push_history = true;
          } else if constexpr (std::is_same_v<T, cmd::SetKnot>) {
            next_state = maximally_entangled(c.surface, Angle(c.xi));
            push_history = true;
          } else if constexpr (std::is_same_v<T, cmd::ApplyGate>) {
            try {
              next_state = apply_gate(state_, parse_gate(c.token));
            } catch (const Error &e) {
              throw ProtocolError("bad_gate", e.what());
            }
            push_history = true;
          } else if constexpr (std::is_same_v<T, cmd::SetBasis>) {
            (c.qubit == 1 ? next_b1 : next_b2) = BasisAxis{Angle(c.angle)};
          } else if constexpr (std::is_same_v<T, cmd::SetToroid>) {
            next_cfg = c.config;
          } else if constexpr (std::is_same_v<T, cmd::Undo>) {
            if (history_.empty())
              throw ProtocolError("empty_history", "nothing to undo");
            next_state = history_.back();
            pop_history = true;
          }
        },
        command);

    // Everything that can fail is computed before the commit below.
    SnapshotMessage msg = build_snapshot(next_state, next_b1, next_b2, next_cfg);
    msg.in_reply_to = in_reply_to;

    if (push_history) {
      history_.push_back(state_);
      if (history_.size() > kHistoryCap)
        history_.pop_front();
    }
    if (pop_history)
      history_.pop_back();
    state_ = next_state;
    basis1_ = next_b1;
    basis2_ = next_b2;
    toroid_ = next_cfg;
    msg.seq = ++seq_;
    msg.session = id_;
    msg.history_depth = history_.size();
    return msg;
  }

  //! Decodes and applies one JSON command; never throws. Returns either a
  //! snapshot or an error message.
  nlohmann::json handle(const nlohmann::json &message) {
    std::optional<std::int64_t> seq;
    if (message.is_object() && message.contains("seq") &&
        message["seq"].is_number_integer())
      seq = message["seq"].get<std::int64_t>();
    try {
      return to_json(apply(parse_command(message), seq));
    } catch (const ProtocolError &e) {
      return error_message(seq, e.code(), e.what());
    } catch (const std::exception &e) {
      return error_message(seq, "internal", e.what());
    }
  }

private:
  static SnapshotMessage build_snapshot(const TwoQubitReal &chi, BasisAxis b1,
                                        BasisAxis b2, const ToroidConfig &cfg) {
    SnapshotMessage msg;
    msg.readouts = compute_readouts(chi, b1, b2);
    msg.toroid_config = cfg;
    msg.toroid = toroid_scene(chi, cfg);
    msg.bloch1 = to_scene(bloch_scene(msg.readouts.rho1, b1));
    msg.bloch2 = to_scene(bloch_scene(msg.readouts.rho2, b2));
    return msg;
  }

  std::string id_;
  TwoQubitReal state_;
  BasisAxis basis1_, basis2_;
  ToroidConfig toroid_;
  std::deque<TwoQubitReal> history_;
  std::uint64_t seq_ = 0;
};

//! Thread-safe set of independent in-memory sessions. Commands for one
//! session are applied one at a time in arrival order.
class SessionRegistry {
public:
  explicit SessionRegistry(ToroidConfig default_config = {})
      : default_config_(default_config) {}

  std::string create() {
    std::lock_guard lock(mutex_);
    std::string id;
    do {
      id = random_id();
    } while (sessions_.contains(id));
    sessions_.emplace(id, std::make_shared<Entry>(id, default_config_));
    return id;
  }

  bool remove(const std::string &id) {
    std::lock_guard lock(mutex_);
    return sessions_.erase(id) > 0;
  }

  bool contains(const std::string &id) const {
    std::lock_guard lock(mutex_);
    return sessions_.contains(id);
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
  }

  //! Runs `message` against session `id`; nullopt when the session is gone.
  std::optional<nlohmann::json> handle(const std::string &id,
                                       const nlohmann::json &message) {
    auto entry = find(id);
    if (!entry)
      return std::nullopt;
    std::lock_guard lock(entry->mutex);
    return entry->session.handle(message);
  }

private:
  struct Entry {
    Entry(std::string id, ToroidConfig cfg) : session(std::move(id), cfg) {}
    std::mutex mutex;
    Session session;
  };

  std::shared_ptr<Entry> find(const std::string &id) const {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  std::string random_id() {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string id(16, '0');
    for (char &ch : id)
      ch = kHex[rng_() & 0xF];
    return id;
  }

  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  ToroidConfig default_config_;
  std::mt19937_64 rng_{std::random_device{}()};
};

} // namespace qubitgeo
