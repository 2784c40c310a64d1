#pragma once

#include <cmath>
#include <numbers>

namespace qubitgeo {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

//! Reduces an angle in radians to the principal range (-pi, pi].
inline double reduce_angle(double radians) {
  double r = std::remainder(radians, kTwoPi);
  if (r <= -kPi)
    r += kTwoPi;
  return r;
}

//! Radian angle held in the principal range (-pi, pi]. Every arithmetic
//! result is reduced again, so the invariant survives wrap-around.
class Angle {
public:
  constexpr Angle() = default;
  explicit Angle(double radians) : value_(reduce_angle(radians)) {}

  double value() const { return value_; }
  double cos() const { return std::cos(value_); }
  double sin() const { return std::sin(value_); }
  double half_cos() const { return std::cos(0.5 * value_); }
  double half_sin() const { return std::sin(0.5 * value_); }

  friend Angle operator+(Angle lhs, Angle rhs) {
    return Angle(lhs.value_ + rhs.value_);
  }
  friend Angle operator-(Angle lhs, Angle rhs) {
    return Angle(lhs.value_ - rhs.value_);
  }
  friend Angle operator-(Angle a) { return Angle(-a.value_); }
  friend bool operator==(Angle, Angle) = default;

private:
  double value_ = 0.0;
};

//! Smallest absolute separation between two angles, in [0, pi].
inline double angular_distance(double a, double b) {
  return std::abs(reduce_angle(a - b));
}
inline double angular_distance(Angle a, Angle b) {
  return angular_distance(a.value(), b.value());
}

} // namespace qubitgeo
