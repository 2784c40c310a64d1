#pragma once

// Map between real two-qubit states and toroid coordinates (s, theta1, theta2),
// with maximally entangled states (|s| = 1/2) identified by a torus knot
// (surface sign, xi) instead of a point.

#include "angle.hpp"
#include "core_states.hpp"

#include <cmath>
#include <variant>

namespace qubitgeo {

//! Below this shared radius the angles cannot be recovered and the state is
//! reported as a knot.
inline constexpr double kKnotThreshold = 1e-7;

using ParamsOrKnot = std::variant<GeometricParams, KnotDescriptor>;

inline bool is_knot(const ParamsOrKnot &p) {
  return std::holds_alternative<KnotDescriptor>(p);
}

//! (sqrt(1/2 + r), 0, 0, sgn(s) sqrt(1/2 - r)): the theta1 = theta2 = 0 line.
inline TwoQubitReal chi0_from_s(double s) {
  const double r = radius_from_s(s);
  const double sign = s < 0.0 ? -1.0 : 1.0;
  return normalize_phase(
      Amplitudes4{std::sqrt(0.5 + r), 0.0, 0.0, sign * std::sqrt(0.5 - r)});
}

//! R(theta1) (x) R(theta2) applied to chi0(s).
inline TwoQubitReal state_from_params(double s, Angle theta1, Angle theta2) {
  const double r = radius_from_s(s);
  const double a0 = std::sqrt(0.5 + r);
  const double d0 = (s < 0.0 ? -1.0 : 1.0) * std::sqrt(0.5 - r);
  const double c1 = theta1.half_cos(), s1 = theta1.half_sin();
  const double c2 = theta2.half_cos(), s2 = theta2.half_sin();
  return normalize_phase(Amplitudes4{
      a0 * c1 * c2 + d0 * s1 * s2,
      a0 * c1 * s2 - d0 * s1 * c2,
      a0 * s1 * c2 - d0 * c1 * s2,
      a0 * s1 * s2 + d0 * c1 * c2,
  });
}

inline TwoQubitReal state_from_params(const GeometricParams &p) {
  return state_from_params(p.s, p.theta1, p.theta2);
}

//! chi+(xi) = (cos, -sin, sin, cos)(xi/2) / sqrt2 on the outer surface,
//! chi-(xi) = (cos, sin, sin, -cos)(xi/2) / sqrt2 on the inner one.
inline TwoQubitReal maximally_entangled(Surface surface, Angle xi) {
  const double h = 1.0 / std::numbers::sqrt2;
  const double c = h * xi.half_cos(), s = h * xi.half_sin();
  if (surface == Surface::Outer)
    return normalize_phase(Amplitudes4{c, -s, s, c});
  return normalize_phase(Amplitudes4{c, s, s, -c});
}

inline TwoQubitReal maximally_entangled(const KnotDescriptor &k) {
  return maximally_entangled(k.surface, k.xi);
}

//! The knot reached by (theta1, theta2) on a bounding surface:
//! xi = theta1 - theta2 outside, xi = theta1 + theta2 inside.
inline KnotDescriptor knot_equivalent(Angle theta1, Angle theta2,
                                      Surface surface) {
  if (surface == Surface::Outer)
    return {surface, theta1 - theta2};
  return {surface, theta1 + theta2};
}

namespace detail {

// xi from the symmetric combinations of the knot family. Both half-angle
// components are formed from two entries each, so neither vanishes by
// cancellation; the doubled angle is independent of the global sign.
inline Angle knot_angle(const TwoQubitReal &chi, Surface surface) {
  const double h = 1.0 / std::numbers::sqrt2;
  double cos_half, sin_half;
  if (surface == Surface::Outer) {
    cos_half = h * (chi.alpha() + chi.delta());
    sin_half = h * (chi.gamma() - chi.beta());
  } else {
    cos_half = h * (chi.alpha() - chi.delta());
    sin_half = h * (chi.beta() + chi.gamma());
  }
  return Angle(2.0 * std::atan2(sin_half, cos_half));
}

inline Angle statepoint_angle(const DensityMatrixReal &rho) {
  return Angle(std::atan2(rho.c(), rho.p_top() - 0.5));
}

} // namespace detail

//! Inverse map. Regular states recover theta_k from the reduced density
//! matrix of qubit k; states with r <= kKnotThreshold become knots.
inline ParamsOrKnot params_from_state(const TwoQubitReal &chi) {
  const double s = entanglement_s(chi);
  const double r = radius_from_s(s);
  if (r <= kKnotThreshold) {
    const Surface surface = s < 0.0 ? Surface::Inner : Surface::Outer;
    return KnotDescriptor{surface, detail::knot_angle(chi, surface)};
  }
  const Angle theta1 = detail::statepoint_angle(reduced_density(chi, 1));
  const Angle theta2 = detail::statepoint_angle(reduced_density(chi, 2));
  return GeometricParams{s, theta1, theta2, r};
}

} // namespace qubitgeo
