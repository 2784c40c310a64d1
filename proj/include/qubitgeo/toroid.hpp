#pragma once

// Annular-toroid embedding of real two-qubit states.
//
// theta1 turns about the vertical axis, theta2 turns around the tube, and the
// tube radius grows with s: rho = separable_tube_radius + s. The s = 0 shell is
// the separable torus, s = +1/2 and s = -1/2 are the outer and inner bounding
// surfaces where maximally entangled states live as torus knots.

#include "angle.hpp"
#include "core_states.hpp"
#include "scene.hpp"
#include "twoqubit_mapping.hpp"
#include "vec.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace qubitgeo {

struct ToroidConfig {
  double major_radius = 3.0;
  double separable_tube_radius = 1.25;

  //! Requires separable_tube_radius > 1/2 and
  //! major_radius > separable_tube_radius + 1/2.
  static ToroidConfig make(double major_radius, double separable_tube_radius) {
    if (!std::isfinite(major_radius) || !std::isfinite(separable_tube_radius))
      throw Error(ErrorCode::BadConfig, "non-finite toroid radius");
    if (!(separable_tube_radius > 0.5))
      throw Error(ErrorCode::BadConfig, "separable tube radius must exceed 1/2");
    if (!(major_radius > separable_tube_radius + 0.5))
      throw Error(ErrorCode::BadConfig,
                  "major radius must exceed separable tube radius + 1/2");
    return {major_radius, separable_tube_radius};
  }

  double outer_tube_radius() const { return separable_tube_radius + 0.5; }
  double inner_tube_radius() const { return separable_tube_radius - 0.5; }

  friend bool operator==(const ToroidConfig &, const ToroidConfig &) = default;
};

inline nlohmann::json to_json(const ToroidConfig &cfg) {
  return {{"major_radius", cfg.major_radius},
          {"separable_tube_radius", cfg.separable_tube_radius}};
}

//! Missing keys keep their defaults; the result is validated.
inline ToroidConfig toroid_config_from_json(const nlohmann::json &j) {
  const ToroidConfig d;
  if (!j.is_object())
    throw Error(ErrorCode::BadConfig, "toroid config must be a JSON object");
  try {
    return ToroidConfig::make(j.value("major_radius", d.major_radius),
                              j.value("separable_tube_radius", d.separable_tube_radius));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::BadConfig, e.what());
  }
}

//! Point at tube radius `tube` and angles (theta1, theta2) on a torus of
//! major radius `major`.
inline Vec3 torus_point(double major, double tube, double theta1, double theta2) {
  const double ring = major + tube * std::cos(theta2);
  return {ring * std::cos(theta1), ring * std::sin(theta1), tube * std::sin(theta2)};
}

inline Vec3 statepoint_3d(const GeometricParams &p, const ToroidConfig &cfg) {
  return torus_point(cfg.major_radius, cfg.separable_tube_radius + p.s,
                     p.theta1.value(), p.theta2.value());
}

inline Vec3 statepoint_3d(const ParamsOrKnot &p, const ToroidConfig &cfg) {
  if (const auto *g = std::get_if<GeometricParams>(&p))
    return statepoint_3d(*g, cfg);
  throw Error(ErrorCode::KnotInput,
              "maximally entangled states are knots, not points");
}

inline constexpr int kDefaultKnotSamples = 256;
inline constexpr int kMinKnotSamples = 16;

struct KnotCurve {
  std::vector<Vec3> points; // first == last
  std::vector<double> theta1;
  std::vector<double> theta2;
};

//! Samples theta1 = t, theta2 = t - xi (outer) or xi - t (inner) for t over
//! one full turn, at s = +-1/2. The last sample repeats the first.
inline KnotCurve knot_curve(const KnotDescriptor &k, const ToroidConfig &cfg,
                            int samples = kDefaultKnotSamples) {
  if (samples < kMinKnotSamples)
    throw Error(ErrorCode::BadArgument,
                "knot curve needs at least 16 samples, got " + std::to_string(samples));
  const bool outer = k.surface == Surface::Outer;
  const double tube = outer ? cfg.outer_tube_radius() : cfg.inner_tube_radius();
  const double xi = k.xi.value();

  KnotCurve curve;
  curve.points.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i + 1 < samples; ++i) {
    const double t = kTwoPi * i / (samples - 1);
    const double t1 = reduce_angle(t);
    const double t2 = reduce_angle(outer ? t - xi : xi - t);
    curve.theta1.push_back(t1);
    curve.theta2.push_back(t2);
    curve.points.push_back(torus_point(cfg.major_radius, tube, t1, t2));
  }
  curve.theta1.push_back(curve.theta1.front());
  curve.theta2.push_back(curve.theta2.front());
  curve.points.push_back(curve.points.front());
  return curve;
}

namespace detail {
inline std::string fmt_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}
} // namespace detail

//! Full toroid panel for chi: the three torus surfaces, the four basis
//! markers, the statepoint with its radial segment (or the knot polyline) and
//! numeric readouts. Nothing is emitted for the annular void.
inline Scene toroid_scene(const TwoQubitReal &chi, const ToroidConfig &cfg,
                          int knot_samples = kDefaultKnotSamples) {
  Scene scene;
  auto &prims = scene.primitives;
  const double R = cfg.major_radius;
  prims.push_back(TorusPrim{"surface.outer", R, cfg.outer_tube_radius(), "s = +1/2"});
  prims.push_back(TorusPrim{"surface.separable", R, cfg.separable_tube_radius, "s = 0"});
  prims.push_back(TorusPrim{"surface.inner", R, cfg.inner_tube_radius(), "s = -1/2"});

  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2) {
      const auto name = std::to_string(q1) + std::to_string(q2);
      const auto p = GeometricParams::make(0.0, Angle(q1 * kPi), Angle(q2 * kPi));
      prims.push_back(
          PointPrim{"marker." + name, coords(statepoint_3d(p, cfg)), "|" + name + ">", "basis"});
    }

  auto readout = [&](const std::string &key, double value, const Coords &anchor) {
    prims.push_back(AnnotationPrim{"readout." + key,
                                   key + " = " + detail::fmt_number(value), anchor,
                                   {{"value", value}}});
  };

  const auto params = params_from_state(chi);
  if (const auto *g = std::get_if<GeometricParams>(&params)) {
    const Vec3 at = statepoint_3d(*g, cfg);
    prims.push_back(PointPrim{"statepoint", coords(at), "chi", "state"});
    const double surface_tube = g->s >= 0.0 ? cfg.outer_tube_radius() : cfg.inner_tube_radius();
    const Vec3 foot = torus_point(R, surface_tube, g->theta1.value(), g->theta2.value());
    prims.push_back(SegmentPrim{"radial", coords(at), coords(foot), 0.5 - std::abs(g->s),
                                "distance to surface"});
    readout("s", g->s, coords(at));
    readout("r", g->r, coords(at));
    readout("theta1", g->theta1.value(), coords(at));
    readout("theta2", g->theta2.value(), coords(at));
  } else {
    const auto &k = std::get<KnotDescriptor>(params);
    auto curve = knot_curve(k, cfg, knot_samples);
    PolylinePrim poly{"knot", {}, true,
                      std::string("knot ") + symbol_of(k.surface) + " xi"};
    for (const auto &pt : curve.points)
      poly.samples.push_back(coords(pt));
    const Coords anchor = poly.samples.front();
    prims.push_back(std::move(poly));
    const double s = entanglement_s(chi);
    readout("s", s, anchor);
    readout("r", radius_from_s(s), anchor);
    readout("surface", sign_of(k.surface), anchor);
    readout("xi", k.xi.value(), anchor);
  }
  return scene;
}

} // namespace qubitgeo
