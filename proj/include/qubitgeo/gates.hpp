#pragma once

// Real orthogonal gates on two qubits and parameter-space trajectories.
// Matrices act on (|00>, |01>, |10>, |11>), qubit 1 the left factor.

#include "angle.hpp"
#include "core_states.hpp"
#include "twoqubit_mapping.hpp"

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qubitgeo {

enum class GateKind { X, Z, H, CNOT, CZ, SWAP };

//! One gate application. `target` is used by X, Z, H and CNOT; `control` by
//! CNOT only. CZ and SWAP are symmetric and take no indices.
struct Gate {
  GateKind kind = GateKind::X;
  int target = 1;
  int control = 0;

  static Gate x(int target) { return {GateKind::X, target, 0}; }
  static Gate z(int target) { return {GateKind::Z, target, 0}; }
  static Gate h(int target) { return {GateKind::H, target, 0}; }
  static Gate cnot(int control, int target) {
    return {GateKind::CNOT, target, control};
  }
  static Gate cz() { return {GateKind::CZ, 0, 0}; }
  static Gate swap() { return {GateKind::SWAP, 0, 0}; }

  friend bool operator==(const Gate &, const Gate &) = default;
};

using GateSequence = std::vector<Gate>;

inline void validate(const Gate &g) {
  auto valid_index = [](int i) { return i == 1 || i == 2; };
  switch (g.kind) {
  case GateKind::X:
  case GateKind::Z:
  case GateKind::H:
    if (!valid_index(g.target))
      throw Error(ErrorCode::BadIndex,
                  "target must be 1 or 2, got " + std::to_string(g.target));
    return;
  case GateKind::CNOT:
    if (!valid_index(g.target) || !valid_index(g.control) ||
        g.target == g.control)
      throw Error(ErrorCode::BadIndex, "CNOT needs distinct control/target in {1,2}");
    return;
  case GateKind::CZ:
  case GateKind::SWAP:
    return;
  }
}

//! Uppercase token: X1, X2, Z1, Z2, H1, H2, CNOT12, CNOT21, CZ, SWAP.
inline std::string to_token(const Gate &g) {
  validate(g);
  const auto t = std::to_string(g.target);
  switch (g.kind) {
  case GateKind::X: return "X" + t;
  case GateKind::Z: return "Z" + t;
  case GateKind::H: return "H" + t;
  case GateKind::CNOT: return "CNOT" + std::to_string(g.control) + t;
  case GateKind::CZ: return "CZ";
  case GateKind::SWAP: return "SWAP";
  }
  return {};
}

inline Gate parse_gate(std::string_view token) {
  auto index = [&](std::string_view digits) -> int {
    if (digits == "1")
      return 1;
    if (digits == "2")
      return 2;
    throw Error(ErrorCode::BadIndex, "bad qubit index in gate token '" +
                                         std::string(token) + "'");
  };
  if (token == "CZ")
    return Gate::cz();
  if (token == "SWAP")
    return Gate::swap();
  if (token.starts_with("CNOT") && token.size() == 6) {
    Gate g = Gate::cnot(index(token.substr(4, 1)), index(token.substr(5, 1)));
    validate(g);
    return g;
  }
  if (token.size() == 2) {
    const int t = index(token.substr(1));
    switch (token[0]) {
    case 'X': return Gate::x(t);
    case 'Z': return Gate::z(t);
    case 'H': return Gate::h(t);
    default: break;
    }
  }
  throw Error(ErrorCode::BadGate, "unknown gate token '" + std::string(token) + "'");
}

//! Comma-separated tokens; empty input is the empty sequence.
inline GateSequence parse_gate_sequence(std::string_view text) {
  GateSequence seq;
  while (!text.empty()) {
    const auto comma = text.find(',');
    seq.push_back(parse_gate(text.substr(0, comma)));
    if (comma == std::string_view::npos)
      break;
    text.remove_prefix(comma + 1);
    if (text.empty())
      throw Error(ErrorCode::BadGate, "gate sequence ends with a comma");
  }
  return seq;
}

namespace detail {

// Index of basis state |q1 q2> is 2*q1 + q2; `bit(i, k)` reads qubit k.
inline int bit(int index, int qubit) {
  return qubit == 1 ? (index >> 1) & 1 : index & 1;
}
inline int flip(int index, int qubit) {
  return index ^ (qubit == 1 ? 2 : 1);
}

} // namespace detail

inline TwoQubitReal apply_gate(const TwoQubitReal &chi, const Gate &g) {
  validate(g);
  const Amplitudes4 &in = chi.amplitudes();
  Amplitudes4 out{};
  for (int i = 0; i < 4; ++i) {
    switch (g.kind) {
    case GateKind::X:
      out[detail::flip(i, g.target)] = in[i];
      break;
    case GateKind::Z:
      out[i] = detail::bit(i, g.target) ? -in[i] : in[i];
      break;
    case GateKind::H: {
      const int partner = detail::flip(i, g.target);
      const double h = 1.0 / std::numbers::sqrt2;
      out[i] = detail::bit(i, g.target) ? h * (in[partner] - in[i])
                                        : h * (in[i] + in[partner]);
      break;
    }
    case GateKind::CNOT:
      out[detail::bit(i, g.control) ? detail::flip(i, g.target) : i] = in[i];
      break;
    case GateKind::CZ:
      out[i] = i == 3 ? -in[i] : in[i];
      break;
    case GateKind::SWAP:
      out[i == 1 ? 2 : i == 2 ? 1 : i] = in[i];
      break;
    }
  }
  return normalize_phase(out);
}

inline TwoQubitReal apply_sequence(TwoQubitReal chi, std::span<const Gate> seq) {
  for (const auto &g : seq)
    chi = apply_gate(chi, g);
  return chi;
}

//! Angle step along the shorter arc; exactly opposite angles step +pi.
inline double shortest_arc(Angle from, Angle to) {
  return reduce_angle(to.value() - from.value());
}

//! Linear path in (s, theta1, theta2) between the parameters of two regular
//! states, `steps` points including both exact endpoints. This is a drawing
//! aid, not a unitary evolution. Throws KnotEndpoint for maximally entangled
//! endpoints.
inline std::vector<GeometricParams> trajectory(const TwoQubitReal &start,
                                               const TwoQubitReal &end,
                                               int steps) {
  if (steps < 2)
    throw Error(ErrorCode::BadArgument, "trajectory needs at least 2 steps");
  const auto p0 = params_from_state(start);
  const auto p1 = params_from_state(end);
  if (is_knot(p0) || is_knot(p1))
    throw Error(ErrorCode::KnotEndpoint,
                "trajectory endpoint is maximally entangled");
  const auto &a = std::get<GeometricParams>(p0);
  const auto &b = std::get<GeometricParams>(p1);
  const double ds = b.s - a.s;
  const double d1 = shortest_arc(a.theta1, b.theta1);
  const double d2 = shortest_arc(a.theta2, b.theta2);

  std::vector<GeometricParams> path;
  path.reserve(static_cast<std::size_t>(steps));
  path.push_back(a);
  for (int k = 1; k + 1 < steps; ++k) {
    const double t = static_cast<double>(k) / (steps - 1);
    path.push_back(GeometricParams::make(a.s + t * ds,
                                         Angle(a.theta1.value() + t * d1),
                                         Angle(a.theta2.value() + t * d2)));
  }
  path.push_back(b);
  return path;
}

} // namespace qubitgeo
