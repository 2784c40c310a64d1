#pragma once

// Seeded property-oracle suites behind `qubitgeo verify`. Each suite checks
// library results against an independent route (explicit 4x4 outer products
// and Kronecker-built gate matrices, plane geometry from raw coordinates,
// direct trigonometry) and reports the worst deviation it saw.
//
// The generator is std::mt19937_64 seeded with the user seed; samples are
// drawn in a fixed order on one thread, so a seed fully determines the report
// for a given build.

#include "bloch_geometry.hpp"
#include "core_states.hpp"
#include "gates.hpp"
#include "scene.hpp"
#include "toroid.hpp"
#include "twoqubit_mapping.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace qubitgeo::verify {

struct SuiteResult {
  std::string name;
  std::size_t samples = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

using Mat4 = std::array<std::array<double, 4>, 4>;
using Mat2 = std::array<std::array<double, 2>, 2>;

namespace oracle {

inline Mat4 outer(const Amplitudes4 &v) {
  Mat4 m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      m[i][j] = v[i] * v[j];
  return m;
}

// Reduced density of qubit `keep` by summing the traced index of the 4x4
// density matrix, rows/cols indexed by 2*q1 + q2.
inline Mat2 reduce(const Mat4 &rho, int keep) {
  Mat2 out{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int k = 0; k < 2; ++k) {
        const int i = keep == 1 ? 2 * a + k : 2 * k + a;
        const int j = keep == 1 ? 2 * b + k : 2 * k + b;
        out[a][b] += rho[i][j];
      }
  return out;
}

inline double radius(const Mat2 &m) { return std::hypot(m[0][0] - 0.5, m[0][1]); }

inline Mat4 kron(const Mat2 &a, const Mat2 &b) {
  Mat4 m{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          m[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
  return m;
}

inline Mat4 gate_matrix(const Gate &g) {
  const double h = 1.0 / std::sqrt(2.0);
  const Mat2 I{{{1, 0}, {0, 1}}}, X{{{0, 1}, {1, 0}}}, Z{{{1, 0}, {0, -1}}},
      H{{{h, h}, {h, -h}}};
  auto lift = [&](const Mat2 &m, int target) {
    return target == 1 ? kron(m, I) : kron(I, m);
  };
  switch (g.kind) {
  case GateKind::X: return lift(X, g.target);
  case GateKind::Z: return lift(Z, g.target);
  case GateKind::H: return lift(H, g.target);
  case GateKind::CNOT:
    if (g.control == 1)
      return {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}};
    return {{{1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}, {0, 1, 0, 0}}};
  case GateKind::CZ:
    return {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}}};
  case GateKind::SWAP:
    return {{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}};
  }
  return {};
}

inline Amplitudes4 apply(const Mat4 &m, const Amplitudes4 &v) {
  Amplitudes4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      out[i] += m[i][j] * v[j];
  return out;
}

// Distance between two rays (vectors up to global sign).
inline double ray_distance(const Amplitudes4 &a, const Amplitudes4 &b) {
  double plus = 0.0, minus = 0.0;
  for (int i = 0; i < 4; ++i) {
    plus = std::max(plus, std::abs(a[i] - b[i]));
    minus = std::max(minus, std::abs(a[i] + b[i]));
  }
  return std::min(plus, minus);
}

} // namespace oracle

class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double angle() { return uniform(-kPi, kPi); }

  Amplitudes4 unit4() {
    std::normal_distribution<double> n;
    for (;;) {
      Amplitudes4 v{n(rng_), n(rng_), n(rng_), n(rng_)};
      const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
      if (norm < 1e-6)
        continue;
      for (double &x : v)
        x /= norm;
      return v;
    }
  }

  DensityMatrixReal mixed_state() {
    const double r = 0.5 * std::sqrt(uniform(0.0, 1.0));
    return density_from_statepoint(BlochPoint::make(r, Angle(angle())));
  }

  Gate gate() {
    static const Gate all[] = {Gate::x(1),       Gate::x(2),       Gate::z(1),
                               Gate::z(2),       Gate::h(1),       Gate::h(2),
                               Gate::cnot(1, 2), Gate::cnot(2, 1), Gate::cz(),
                               Gate::swap()};
    return all[std::uniform_int_distribution<int>(0, 9)(rng_)];
  }

  std::vector<double> weights(int n) {
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (double &x : w)
      total += x = uniform(0.05, 1.0);
    for (double &x : w)
      x /= total;
    return w;
  }

private:
  std::mt19937_64 rng_;
};

struct Tracker {
  double worst = 0.0;
  void add(double e) { worst = std::isnan(e) ? INFINITY : std::max(worst, e); }
};

inline SuiteResult finish(std::string name, std::size_t n, const Tracker &t, double tol) {
  return {std::move(name), n, t.worst, tol, t.worst < tol};
}

inline SuiteResult shared_radius(Sampler &rng, std::size_t n) {
  Tracker t;
  for (std::size_t i = 0; i < n; ++i) {
    const auto chi = normalize_phase(rng.unit4());
    const auto rho = oracle::outer(chi.amplitudes());
    const double r1 = reduced_density(chi, 1).radius();
    const double r2 = reduced_density(chi, 2).radius();
    t.add(std::abs(r1 - r2));
    t.add(std::abs(r1 - oracle::radius(oracle::reduce(rho, 1))));
    t.add(std::abs(r2 - oracle::radius(oracle::reduce(rho, 2))));
  }
  return finish("shared_radius", n, t, 1e-12);
}

inline SuiteResult right_triangle(Sampler &rng, std::size_t n) {
  Tracker t;
  for (std::size_t i = 0; i < n; ++i) {
    const auto chi = normalize_phase(rng.unit4());
    const double s = entanglement_s(chi);
    const double r = reduced_density(chi, 1).radius();
    t.add(std::abs(s * s + r * r - 0.25));
  }
  return finish("right_triangle", n, t, 1e-12);
}

inline SuiteResult segment_identities(Sampler &rng, std::size_t n) {
  Tracker t;
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = rng.angle(), phi = rng.angle();
    const double a = std::cos(0.5 * reduce_angle(theta - phi));
    const double b = std::sin(0.5 * reduce_angle(theta - phi));
    const auto scene =
        bloch_scene(density_from_statepoint({0.5, Angle(theta)}), BasisAxis{Angle(phi)});
    const double bd = scene.segment("BD")->length, ad = scene.segment("AD")->length;
    t.add(std::abs(bd - a * a));
    t.add(std::abs(ad - b * b));
    t.add(std::abs(scene.segment("SD")->length - std::abs(a * b)));
    t.add(std::abs(distance(scene.b, scene.d) - a * a));
    t.add(std::abs(distance(scene.a, scene.d) - b * b));
    t.add(std::abs(distance(scene.s, scene.d) - std::abs(a * b)));
    if (bd + ad != 1.0)
      t.add(INFINITY);
  }
  return finish("segment_identities", n, t, 1e-12);
}

inline std::vector<SuiteResult> mixing(Sampler &rng, std::size_t n) {
  Tracker centroid_err, split_err;
  for (std::size_t i = 0; i < n; ++i) {
    const int k = i % 2 == 0 ? 2 : 3;
    const auto w = rng.weights(k);
    std::vector<WeightedDensity> parts;
    Vec2 centroid{};
    for (int j = 0; j < k; ++j) {
      const auto rho = rng.mixed_state();
      parts.push_back({rho, w[j]});
      centroid = centroid + w[j] * statepoint_from_density(rho).cartesian();
    }
    const auto mixed = statepoint_from_density(mix(parts)).cartesian();
    centroid_err.add(distance(mixed, centroid));
    if (k == 2) {
      const Vec2 s1 = statepoint_from_density(parts[0].rho).cartesian();
      const Vec2 s2 = statepoint_from_density(parts[1].rho).cartesian();
      // |S1 S| : |S S2| = p2 : p1
      split_err.add(std::abs(w[0] * distance(s1, mixed) - w[1] * distance(mixed, s2)));
    }
  }
  return {finish("mixing_centroid", n, centroid_err, 1e-12),
          finish("mixing_split_ratio", (n + 1) / 2, split_err, 1e-9)};
}

inline SuiteResult bijection(Sampler &rng, std::size_t n) {
  Tracker t;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = rng.uniform(-0.499, 0.499);
    const Angle t1(rng.angle()), t2(rng.angle());
    const auto back = params_from_state(state_from_params(s, t1, t2));
    const auto *g = std::get_if<GeometricParams>(&back);
    if (!g) {
      t.add(INFINITY);
      continue;
    }
    t.add(std::abs(g->s - s));
    t.add(angular_distance(g->theta1, t1));
    t.add(angular_distance(g->theta2, t2));
  }
  return finish("bijection", n, t, 1e-9);
}

inline std::vector<SuiteResult> knot_collapse(Sampler &rng, std::size_t n) {
  Tracker vec_err, xi_err;
  for (Surface surface : {Surface::Outer, Surface::Inner}) {
    const Angle xi(rng.angle());
    const double s = 0.5 * sign_of(surface);
    const auto reference = maximally_entangled(surface, xi);
    for (std::size_t i = 0; i < n; ++i) {
      const Angle t1(rng.angle());
      const Angle t2 = surface == Surface::Outer ? t1 - xi : xi - t1;
      const auto chi = state_from_params(s, t1, t2);
      double diff = 0.0;
      for (int k = 0; k < 4; ++k)
        diff = std::max(diff, std::abs(chi[k] - reference[k]));
      vec_err.add(diff);
      const auto p = params_from_state(chi);
      const auto *knot = std::get_if<KnotDescriptor>(&p);
      if (!knot || knot->surface != surface)
        xi_err.add(INFINITY);
      else
        xi_err.add(angular_distance(knot->xi, xi));
    }
  }
  return {finish("knot_collapse", 2 * n, vec_err, 1e-12),
          finish("knot_xi_recovery", 2 * n, xi_err, 1e-9)};
}

inline std::vector<SuiteResult> spot_values() {
  Tracker chi_err, bell_err;
  const double h = 1.0 / std::sqrt(2.0);
  const auto plus = maximally_entangled(Surface::Outer, Angle(0.0));
  const auto minus = maximally_entangled(Surface::Inner, Angle(0.0));
  const Amplitudes4 want_plus{h, 0, 0, h}, want_minus{h, 0, 0, -h};
  for (int k = 0; k < 4; ++k) {
    chi_err.add(std::abs(plus[k] - want_plus[k]));
    chi_err.add(std::abs(minus[k] - want_minus[k]));
  }
  const Amplitudes4 zero{1, 0, 0, 0};
  const auto bell_oracle = oracle::apply(oracle::gate_matrix(Gate::cnot(1, 2)),
                                         oracle::apply(oracle::gate_matrix(Gate::h(1)), zero));
  const auto bell = apply_sequence(normalize_phase(zero),
                                   std::vector{Gate::h(1), Gate::cnot(1, 2)});
  bell_err.add(std::abs(entanglement_s(bell) - 0.5));
  bell_err.add(std::abs(bell_oracle[0] * bell_oracle[3] - bell_oracle[1] * bell_oracle[2] - 0.5));
  bell_err.add(oracle::ray_distance(bell.amplitudes(), bell_oracle));
  return {finish("spot_chi_pm", 2, chi_err, 1e-15), finish("spot_bell", 1, bell_err, 1e-12)};
}

inline SuiteResult gate_closure(Sampler &rng, std::size_t n) {
  Tracker t;
  for (std::size_t i = 0; i < n; ++i) {
    const auto chi = normalize_phase(rng.unit4());
    const Gate g = rng.gate();
    const auto out = apply_gate(chi, g);
    double norm2 = 0.0;
    for (double x : out.amplitudes())
      norm2 += x * x;
    t.add(std::abs(std::sqrt(norm2) - 1.0));
    t.add(oracle::ray_distance(out.amplitudes(),
                               oracle::apply(oracle::gate_matrix(g), chi.amplitudes())));
    t.add(oracle::ray_distance(apply_gate(out, g).amplitudes(), chi.amplitudes()));
  }
  return finish("gate_closure", n, t, 1e-12);
}

inline SuiteResult toroid_geometry(Sampler &rng, std::size_t n) {
  Tracker t;
  const ToroidConfig cfg;
  const auto spot = statepoint_3d(GeometricParams::make(0.0, Angle(0), Angle(0)), cfg);
  t.add(distance(spot, Vec3{4.25, 0.0, 0.0}));
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = GeometricParams::make(0.0, Angle(rng.angle()), Angle(rng.angle()));
    const Vec3 q = statepoint_3d(p, cfg);
    t.add(std::abs(std::hypot(std::hypot(q.x, q.y) - cfg.major_radius, q.z) -
                   cfg.separable_tube_radius));
  }
  const std::size_t knots = std::max<std::size_t>(1, n / 1000);
  for (std::size_t i = 0; i < knots; ++i) {
    const Surface surface = i % 2 == 0 ? Surface::Outer : Surface::Inner;
    const double xi = rng.angle();
    const auto curve = knot_curve({surface, Angle(xi)}, cfg);
    // Both ends against the parametrization at t = 0 and t = 2 pi, unreduced.
    const double tube = cfg.separable_tube_radius + 0.5 * sign_of(surface);
    for (const double t0 : {0.0, kTwoPi}) {
      const double t2 = surface == Surface::Outer ? t0 - xi : xi - t0;
      const Vec3 end = torus_point(cfg.major_radius, tube, t0, t2);
      t.add(distance(t0 == 0.0 ? curve.points.front() : curve.points.back(), end));
    }
    double w1 = 0.0, w2 = 0.0;
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
      const auto &a = curve.points[k - 1], &b = curve.points[k];
      w1 += reduce_angle(std::atan2(b.y, b.x) - std::atan2(a.y, a.x));
      w2 += reduce_angle(std::atan2(b.z, std::hypot(b.x, b.y) - cfg.major_radius) -
                         std::atan2(a.z, std::hypot(a.x, a.y) - cfg.major_radius));
    }
    t.add(std::abs(w1 - kTwoPi));
    t.add(std::abs(w2 - (surface == Surface::Outer ? kTwoPi : -kTwoPi)));
  }
  return finish("toroid_geometry", n + knots, t, 1e-12);
}

//! All suites in report order. Mixing runs samples/10 cases and knot collapse
//! samples/100 per surface.
inline std::vector<SuiteResult> run_all(std::size_t samples, std::uint64_t seed) {
  Sampler rng(seed);
  std::vector<SuiteResult> out;
  auto append = [&](std::vector<SuiteResult> more) {
    out.insert(out.end(), more.begin(), more.end());
  };
  out.push_back(shared_radius(rng, samples));
  out.push_back(right_triangle(rng, samples));
  out.push_back(segment_identities(rng, samples));
  append(mixing(rng, std::max<std::size_t>(1, samples / 10)));
  out.push_back(bijection(rng, samples));
  append(knot_collapse(rng, std::max<std::size_t>(1, samples / 100)));
  append(spot_values());
  out.push_back(gate_closure(rng, samples));
  out.push_back(toroid_geometry(rng, samples));
  return out;
}

} // namespace qubitgeo::verify
