#pragma once

// One-qubit geometry on the Bloch Circle (radius 1/2).
//
// Plane coordinates put the circle center C at the origin with x to the right
// and y up. A statepoint at angle theta and radius r sits at
// r * (sin theta, cos theta): theta = 0 is the |0> end of the standard
// diameter and positive angles lie on the right-hand side, where c > 0. A
// basis axis at angle phi places its |0> point A at (1/2)(sin phi, cos phi);
// rotating the axis and the statepoint use the same sense of rotation.

#include "angle.hpp"
#include "core_states.hpp"
#include "vec.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qubitgeo {

inline constexpr double kBlochRadius = 0.5;

//! Unit direction in the Bloch plane for the angle theta.
inline Vec2 bloch_direction(Angle theta) { return {theta.sin(), theta.cos()}; }
inline Vec2 bloch_direction(double theta) {
  return {std::sin(theta), std::cos(theta)};
}

//! Polar statepoint. r in [0, 1/2]; r = 1/2 is a pure state.
struct BlochPoint {
  double r = kBlochRadius;
  Angle theta;

  static BlochPoint make(double r, Angle theta) {
    if (!std::isfinite(r) || r < -kNormTolerance ||
        r > kBlochRadius + kNormTolerance)
      throw Error(ErrorCode::DomainError,
                  "Bloch radius outside [0, 1/2]: " + std::to_string(r));
    return {std::clamp(r, 0.0, kBlochRadius), theta};
  }

  Vec2 cartesian() const { return r * bloch_direction(theta); }
  bool is_pure() const { return r >= kBlochRadius - kNormTolerance; }
};

//! Orientation of a measurement diameter; 0 is the standard |0>/|1> axis.
struct BasisAxis {
  Angle axis_angle;
};

inline DensityMatrixReal density_from_statepoint(const BlochPoint &p) {
  const double p0 = 0.5 + p.r;
  const double p1 = 0.5 - p.r;
  const double ch = p.theta.half_cos(), sh = p.theta.half_sin();
  return DensityMatrixReal::make(p0 * ch * ch + p1 * sh * sh,
                                 (p0 - p1) * sh * ch,
                                 p1 * ch * ch + p0 * sh * sh);
}

//! Inverse of density_from_statepoint. The center (r = 0) reports theta = 0.
inline BlochPoint statepoint_from_density(const DensityMatrixReal &rho) {
  const double r = std::min(rho.radius(), kBlochRadius);
  if (r <= kZeroThreshold)
    return {r, Angle(0.0)};
  return {r, Angle(std::atan2(rho.c(), rho.p_top() - 0.5))};
}

//! Plane position of the statepoint of rho.
inline Vec2 statepoint_xy(const DensityMatrixReal &rho) {
  return {rho.c(), rho.p_top() - 0.5};
}

//! Representation of rho in the basis whose |0> sits at `basis`:
//! R(-phi) rho R(-phi)^T with R(t) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]].
inline DensityMatrixReal rebase_density(const DensityMatrixReal &rho,
                                        BasisAxis basis) {
  const double ch = basis.axis_angle.half_cos();
  const double sh = basis.axis_angle.half_sin();
  // R(-phi) = [[ch, sh], [-sh, ch]]
  const double p = rho.p_top(), q = rho.p_bot(), c = rho.c();
  const double top = ch * ch * p + 2.0 * ch * sh * c + sh * sh * q;
  const double bot = sh * sh * p - 2.0 * ch * sh * c + ch * ch * q;
  const double off = ch * sh * (q - p) + (ch * ch - sh * sh) * c;
  return DensityMatrixReal::make(top, off, bot);
}

struct MeasurementProbs {
  double p0 = 1.0;
  double p1 = 0.0;
};

//! Outcome probabilities for the |0>/|1> ends of the basis diameter, clamped
//! into [0, 1] and summing to exactly 1.
inline MeasurementProbs measurement_probs(const DensityMatrixReal &rho,
                                          BasisAxis basis) {
  const double p0 = std::clamp(rebase_density(rho, basis).p_top(), 0.0, 1.0);
  return {p0, 1.0 - p0};
}

struct WeightedDensity {
  DensityMatrixReal rho;
  double weight = 0.0;
};

//! Epistemic mixture sum_i p_i rho_i. Weights must be finite, nonnegative and
//! sum to 1 within kNormTolerance.
inline DensityMatrixReal mix(std::span<const WeightedDensity> components) {
  if (components.empty())
    throw Error(ErrorCode::BadWeights, "empty mixture");
  double total = 0.0, top = 0.0, off = 0.0, bot = 0.0;
  for (const auto &[rho, w] : components) {
    if (!std::isfinite(w) || w < 0.0)
      throw Error(ErrorCode::BadWeights,
                  "weight must be a nonnegative number: " + std::to_string(w));
    total += w;
    top += w * rho.p_top();
    off += w * rho.c();
    bot += w * rho.p_bot();
  }
  if (std::abs(total - 1.0) > kNormTolerance)
    throw Error(ErrorCode::BadWeights,
                "weights sum to " + std::to_string(total));
  return DensityMatrixReal::make(top, off, bot);
}

struct BlochSegment {
  std::string id;
  std::string label;
  Vec2 from;
  Vec2 to;
  double length = 0.0;
};

//! Labeled construction for one density matrix and one measurement axis.
//! Points: A (|0> end), B (|1> end), C (center), D (foot of the
//! perpendicular from S onto AB), S (statepoint). D, S and C coincide at the
//! center rather than being dropped.
struct BlochScene {
  double circle_radius = kBlochRadius;
  BasisAxis basis;
  DensityMatrixReal rho;          // standard basis
  DensityMatrixReal rho_in_basis; // basis of `basis`
  BlochPoint statepoint;          // standard-basis polar coordinates
  bool pure = false;
  Vec2 a, b, c, d, s;
  std::vector<BlochSegment> segments;
  int sign_b = 0; // sign of b = sin(theta'/2) in the chosen basis
  int sign_c = 0; // sign of the off-diagonal element in the chosen basis

  const BlochSegment *segment(std::string_view id) const {
    for (const auto &seg : segments)
      if (seg.id == id)
        return &seg;
    return nullptr;
  }
};

namespace detail {
inline int sign_with_zero(double x) {
  if (std::abs(x) <= kZeroThreshold)
    return 0;
  return x < 0.0 ? -1 : 1;
}
} // namespace detail

inline BlochScene bloch_scene(const DensityMatrixReal &rho, BasisAxis basis) {
  BlochScene scene;
  scene.basis = basis;
  scene.rho = rho;
  scene.rho_in_basis = rebase_density(rho, basis);
  scene.statepoint = statepoint_from_density(rho);
  scene.pure = scene.statepoint.is_pure();

  const Vec2 axis = bloch_direction(basis.axis_angle);
  scene.c = {0.0, 0.0};
  scene.a = kBlochRadius * axis;
  scene.b = -kBlochRadius * axis;
  scene.s = statepoint_xy(rho);
  scene.d = dot(scene.s, axis) * axis;

  const double r = scene.statepoint.r;
  const Angle relative = scene.statepoint.theta - basis.axis_angle;
  const auto probs = measurement_probs(rho, basis);
  const double c_in_basis = scene.rho_in_basis.c();
  scene.sign_c = detail::sign_with_zero(c_in_basis);
  scene.sign_b = r <= kZeroThreshold ? 0 : detail::sign_with_zero(relative.value());

  auto &segs = scene.segments;
  if (scene.pure) {
    segs.push_back({"AS", "b", scene.a, scene.s, std::abs(relative.half_sin())});
    segs.push_back({"BS", "a", scene.b, scene.s, std::abs(relative.half_cos())});
  }
  segs.push_back({"AD", "b^2", scene.a, scene.d, probs.p1});
  segs.push_back({"BD", "a^2", scene.b, scene.d, probs.p0});
  segs.push_back({"SD", "c", scene.s, scene.d, std::abs(c_in_basis)});
  segs.push_back({"r", "r", scene.c, scene.s, r});

  // Mixedness segment: perpendicular to CS from S out to the circumference.
  const double s_len = std::sqrt((kBlochRadius - r) * (kBlochRadius + r));
  const Vec2 perp = bloch_direction(scene.statepoint.theta.value() + 0.5 * kPi);
  segs.push_back({"s", "|s|", scene.s, scene.s + s_len * perp, s_len});
  return scene;
}

} // namespace qubitgeo
