#pragma once

#include "raa/types.hpp"

namespace raa {

/// Rotation matrix mapping the local (array) coordinate system to the global
/// one: Rz(gamma) * Ry(beta) * Rx(alpha), written out as the explicit 3x3
/// product. Orthonormal with determinant +1.
inline Mat3 rotation_matrix(const ArrayRotation& r) {
  const Real ca = std::cos(r.alpha), sa = std::sin(r.alpha);
  const Real cb = std::cos(r.beta), sb = std::sin(r.beta);
  const Real cg = std::cos(r.gamma), sg = std::sin(r.gamma);
  Mat3 m;
  m << cb * cg, sa * sb * cg - ca * sg, ca * sb * cg + sa * sg,
       cb * sg, sa * sb * sg + ca * cg, ca * sb * sg - sa * cg,
       -sb,     sa * cb,                ca * cb;
  return m;
}

/// Position of element n after rotation, in wavelength units. The unrotated
/// array lies on the x-axis with positions [n*d, 0, 0].
inline Vec3 rotated_position(const ArrayRotation& r, int element, Real spacing) {
  const Real cb = std::cos(r.beta), sb = std::sin(r.beta);
  const Real cg = std::cos(r.gamma), sg = std::sin(r.gamma);
  return Vec3(cb * cg, cb * sg, -sb) * (element * spacing);
}

/// Boresight direction after rotation; the unrotated boresight is +y.
inline Vec3 boresight(const ArrayRotation& r) {
  const Real ca = std::cos(r.alpha), sa = std::sin(r.alpha);
  const Real cb = std::cos(r.beta), sb = std::sin(r.beta);
  const Real cg = std::cos(r.gamma), sg = std::sin(r.gamma);
  return Vec3(-ca * sg + sa * sb * cg, ca * cg + sa * sb * sg, sa * cb);
}

/// Unit vector pointing along the departure direction theta in the xy-plane.
inline Vec3 signal_direction(Direction theta) {
  return Vec3(-std::cos(theta.theta), std::sin(theta.theta), 0.0);
}

/// Cosine of the post-rotation angle of departure seen along the array axis:
/// cos(phi) = -cos(beta) * cos(gamma + theta). Independent of alpha.
inline Real rotated_aod_cos(const ArrayRotation& r, Direction theta) {
  return -std::cos(r.beta) * std::cos(r.gamma + theta.theta);
}

/// Cosine of the angle between the rotated element boresight and the signal
/// direction:
///   cos(eps) = cos(alpha) * sin(gamma + theta)
///            - sin(alpha) * sin(beta) * cos(gamma + theta),
/// which is boresight(r) . signal_direction(theta) in closed form.
inline Real element_pattern_cos(const ArrayRotation& r, Direction theta) {
  const Real gt = r.gamma + theta.theta;
  return std::cos(r.alpha) * std::sin(gt) -
         std::sin(r.alpha) * std::sin(r.beta) * std::cos(gt);
}

}  // namespace raa
