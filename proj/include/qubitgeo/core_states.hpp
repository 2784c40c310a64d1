#pragma once

// State types for the real-amplitude subspace of one and two qubits.
//
// Component order for two qubits is (|00>, |01>, |10>, |11>) with qubit 1 the
// left tensor factor, so ket(a1,b1) (x) ket(a2,b2) = (a1a2, a1b2, b1a2, b1b2).

#include "angle.hpp"
#include "error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>

namespace qubitgeo {

//! Input vectors must have unit norm within this tolerance.
inline constexpr double kNormTolerance = 1e-9;
//! Tolerance for closed-form identities (shared radius, s^2 + r^2 = 1/4, ...).
inline constexpr double kIdentityTolerance = 1e-12;
//! Entries at or below this magnitude count as zero for the sign convention.
inline constexpr double kZeroThreshold = 1e-12;

namespace detail {

template <std::size_t N>
std::array<double, N> canonical_ray(std::array<double, N> v) {
  double norm2 = 0.0;
  bool any = false;
  for (double x : v) {
    norm2 += x * x;
    any = any || std::abs(x) > kZeroThreshold;
  }
  if (!any)
    throw Error(ErrorCode::ZeroVector, "all amplitudes vanish");
  // Already-unit input keeps its bits, so normalizing twice changes nothing.
  const bool unit = std::abs(norm2 - 1.0) <= 8 * std::numeric_limits<double>::epsilon();
  const double inv = unit ? 1.0 : 1.0 / std::sqrt(norm2);
  double sign = 1.0;
  for (double x : v) {
    if (std::abs(x) > kZeroThreshold) {
      sign = x < 0.0 ? -1.0 : 1.0;
      break;
    }
  }
  for (double &x : v)
    x *= sign * inv;
  return v;
}

template <std::size_t N> double norm(const std::array<double, N> &v) {
  double n2 = 0.0;
  for (double x : v)
    n2 += x * x;
  return std::sqrt(n2);
}

} // namespace detail

using Amplitudes2 = std::array<double, 2>;
using Amplitudes4 = std::array<double, 4>;

//! Pure one-qubit state a|0> + b|1>, unit norm, first nonzero entry positive.
class QubitVectorReal {
public:
  QubitVectorReal() = default;

  double a() const { return v_[0]; }
  double b() const { return v_[1]; }
  const Amplitudes2 &amplitudes() const { return v_; }

  friend QubitVectorReal normalize_phase(const Amplitudes2 &raw);

private:
  explicit QubitVectorReal(Amplitudes2 v) : v_(v) {}
  Amplitudes2 v_{1.0, 0.0};
};

//! Pure two-qubit state alpha|00> + beta|01> + gamma|10> + delta|11>, unit
//! norm, first nonzero entry (in that order) positive.
class TwoQubitReal {
public:
  TwoQubitReal() = default;

  double alpha() const { return v_[0]; }
  double beta() const { return v_[1]; }
  double gamma() const { return v_[2]; }
  double delta() const { return v_[3]; }
  double operator[](std::size_t i) const { return v_[i]; }
  const Amplitudes4 &amplitudes() const { return v_; }

  friend TwoQubitReal normalize_phase(const Amplitudes4 &raw);

private:
  explicit TwoQubitReal(Amplitudes4 v) : v_(v) {}
  Amplitudes4 v_{1.0, 0.0, 0.0, 0.0};
};

//! Multiplies by +-1 so the first nonzero entry is positive and rescales to
//! unit norm. Throws ZeroVector when every entry is below kZeroThreshold.
inline QubitVectorReal normalize_phase(const Amplitudes2 &raw) {
  return QubitVectorReal(detail::canonical_ray(raw));
}
inline TwoQubitReal normalize_phase(const Amplitudes4 &raw) {
  return TwoQubitReal(detail::canonical_ray(raw));
}
inline QubitVectorReal normalize_phase(const QubitVectorReal &q) {
  return normalize_phase(q.amplitudes());
}
inline TwoQubitReal normalize_phase(const TwoQubitReal &chi) {
  return normalize_phase(chi.amplitudes());
}

//! True when |v| is within kNormTolerance of 1.
template <std::size_t N> bool is_unit(const std::array<double, N> &v) {
  return std::abs(detail::norm(v) - 1.0) <= kNormTolerance;
}

//! Real symmetric 2x2 one-qubit density matrix [[p_top, c], [c, p_bot]].
class DensityMatrixReal {
public:
  DensityMatrixReal() = default;

  //! Validates trace, diagonal range and positive semidefiniteness within
  //! kNormTolerance; the diagonal is clamped into [0, 1].
  static DensityMatrixReal make(double p_top, double c, double p_bot) {
    if (!std::isfinite(p_top) || !std::isfinite(c) || !std::isfinite(p_bot))
      throw Error(ErrorCode::InvalidDensity, "non-finite entry");
    if (std::abs(p_top + p_bot - 1.0) > kNormTolerance)
      throw Error(ErrorCode::InvalidDensity, "trace is not 1");
    if (p_top < -kNormTolerance || p_bot < -kNormTolerance)
      throw Error(ErrorCode::InvalidDensity, "negative diagonal entry");
    if (c * c > p_top * p_bot + kNormTolerance)
      throw Error(ErrorCode::InvalidDensity, "not positive semidefinite");
    return DensityMatrixReal(std::clamp(p_top, 0.0, 1.0), c,
                             std::clamp(p_bot, 0.0, 1.0));
  }

  double p_top() const { return p_top_; }
  double p_bot() const { return p_bot_; }
  double c() const { return c_; }

  //! Distance of the statepoint from the Bloch Circle center.
  double radius() const { return std::hypot(p_top_ - 0.5, c_); }

private:
  DensityMatrixReal(double p_top, double c, double p_bot)
      : p_top_(p_top), c_(c), p_bot_(p_bot) {}

  double p_top_ = 1.0;
  double c_ = 0.0;
  double p_bot_ = 0.0;
};

enum class Surface { Outer = +1, Inner = -1 };

inline int sign_of(Surface s) { return s == Surface::Outer ? 1 : -1; }
inline char symbol_of(Surface s) { return s == Surface::Outer ? '+' : '-'; }

//! Radius shared by both constituent qubits: r = sqrt(1/4 - s^2). |s| up to
//! 1/2 + 1e-9 is clamped onto the boundary; beyond that is a DomainError.
inline double radius_from_s(double s) {
  if (!std::isfinite(s) || std::abs(s) > 0.5 + kNormTolerance)
    throw Error(ErrorCode::DomainError,
                "|s| exceeds 1/2: s = " + std::to_string(s));
  const double m = std::min(std::abs(s), 0.5);
  return std::sqrt((0.5 - m) * (0.5 + m));
}

inline double clamp_s(double s) { return std::clamp(s, -0.5, 0.5); }

//! Toroid coordinates (s, theta1, theta2) of a regular two-qubit state. The
//! radius is derived from s on construction and never set independently.
struct GeometricParams {
  double s = 0.0;
  Angle theta1;
  Angle theta2;
  double r = 0.5;

  static GeometricParams make(double s, Angle theta1, Angle theta2) {
    const double r = radius_from_s(s);
    return {clamp_s(s), theta1, theta2, r};
  }
};

//! Identity of a maximally entangled state: surface sign and angle xi.
struct KnotDescriptor {
  Surface surface = Surface::Outer;
  Angle xi;
};

//! (cos(theta/2), sin(theta/2)), the pure statepoint at angle theta.
inline QubitVectorReal ket_from_angle(Angle theta) {
  return normalize_phase(Amplitudes2{theta.half_cos(), theta.half_sin()});
}

inline TwoQubitReal tensor_product(const QubitVectorReal &q1,
                                   const QubitVectorReal &q2) {
  return normalize_phase(Amplitudes4{q1.a() * q2.a(), q1.a() * q2.b(),
                                     q1.b() * q2.a(), q1.b() * q2.b()});
}

//! Entanglement parameter s = alpha*delta - beta*gamma, in [-1/2, 1/2].
inline double entanglement_s(const TwoQubitReal &chi) {
  return clamp_s(chi.alpha() * chi.delta() - chi.beta() * chi.gamma());
}

//! Traces out qubit `traced` (1 or 2) and returns the density matrix of the
//! other one. Tracing out qubit 1 gives (x, y, z) = (alpha^2 + gamma^2,
//! alpha*beta + gamma*delta, beta^2 + delta^2); tracing out qubit 2 gives
//! (w, u, v) = (alpha^2 + beta^2, alpha*gamma + beta*delta, gamma^2 + delta^2).
inline DensityMatrixReal partial_trace(const TwoQubitReal &chi, int traced) {
  const double al = chi.alpha(), be = chi.beta(), ga = chi.gamma(),
               de = chi.delta();
  if (traced == 1)
    return DensityMatrixReal::make(al * al + ga * ga, al * be + ga * de,
                                   be * be + de * de);
  if (traced == 2)
    return DensityMatrixReal::make(al * al + be * be, al * ga + be * de,
                                   ga * ga + de * de);
  throw Error(ErrorCode::BadIndex,
              "qubit index must be 1 or 2, got " + std::to_string(traced));
}

//! Reduced density matrix of qubit `qubit` (1 or 2).
inline DensityMatrixReal reduced_density(const TwoQubitReal &chi, int qubit) {
  if (qubit != 1 && qubit != 2)
    throw Error(ErrorCode::BadIndex,
                "qubit index must be 1 or 2, got " + std::to_string(qubit));
  return partial_trace(chi, qubit == 1 ? 2 : 1);
}

} // namespace qubitgeo
