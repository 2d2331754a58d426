#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>

namespace raa {

using Real = double;
using Complex = std::complex<Real>;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr Real kPi = 3.14159265358979323846;
inline constexpr Real kTwoPi = 2.0 * kPi;

/// Wraps an angle into [0, 2*pi). The half-open interval keeps grid
/// sampling unambiguous (0 and 2*pi are the same point).
inline Real wrap_two_pi(Real angle) {
  Real r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

inline Real deg_to_rad(Real deg) { return deg * kPi / 180.0; }
inline Real rad_to_deg(Real rad) { return rad * 180.0 / kPi; }

/// Array rotation vector: rotation angles about the x-, y- and z-axes.
/// Angles are stored in radians, normalized into [0, 2*pi) on construction.
struct ArrayRotation {
  Real alpha = 0.0;
  Real beta = 0.0;
  Real gamma = 0.0;

  ArrayRotation() = default;
  ArrayRotation(Real a, Real b, Real g)
      : alpha(wrap_two_pi(a)), beta(wrap_two_pi(b)), gamma(wrap_two_pi(g)) {}

  static ArrayRotation from_degrees(Real a, Real b, Real g) {
    return {deg_to_rad(a), deg_to_rad(b), deg_to_rad(g)};
  }
};

/// Angle of departure in the global coordinate system, normalized into
/// [0, 2*pi). The associated signal direction lies in the xy-plane.
struct Direction {
  Real theta = 0.0;

  Direction() = default;
  explicit Direction(Real t) : theta(wrap_two_pi(t)) {}

  static Direction from_degrees(Real deg) { return Direction(deg_to_rad(deg)); }
};

/// Wrapped difference theta0 - theta1 mapped into [0, 2*pi). Feasibility
/// intervals are two-sided, so both x and 2*pi - x denote the same physical
/// separation.
inline Real angular_separation(Direction theta0, Direction theta1) {
  return wrap_two_pi(theta0.theta - theta1.theta);
}

/// Closed-interval membership with floating-point slack.
inline bool in_closed_interval(Real x, Real lo, Real hi, Real slack = 1e-9) {
  return x >= lo - slack && x <= hi + slack;
}

}  // namespace raa
