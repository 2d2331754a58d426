#pragma once

#include "raa/geometry.hpp"
#include "raa/types.hpp"

#include <stdexcept>

namespace raa {

/// Per-element radiation pattern. Either isotropic (unit gain everywhere) or
/// the cosine-power model g0 * cos(eps)^(2p) over the front hemisphere, with
/// g0 = 2*(2p+1) so the gain averages to one over the sphere.
struct RadiationPattern {
  enum class Kind { Isotropic, Cosine };

  Kind kind = Kind::Isotropic;
  Real directivity = 0.0;  // exponent p, meaningful for Cosine only

  static RadiationPattern isotropic() { return {}; }

  static RadiationPattern cosine(Real p) {
    if (!(p > 0.0)) throw std::invalid_argument("cosine pattern requires directivity p > 0");
    return {Kind::Cosine, p};
  }

  /// Peak element gain g0 (at boresight).
  Real peak_gain() const {
    return kind == Kind::Isotropic ? 1.0 : 2.0 * (2.0 * directivity + 1.0);
  }
};

/// Uniform linear array: element count, spacing in wavelengths and the shared
/// element radiation pattern. Spacing is kept in wavelength units so the
/// carrier wavelength never appears explicitly.
struct ArrayConfig {
  int n_elements = 8;
  Real spacing = 0.5;
  RadiationPattern pattern = RadiationPattern::isotropic();

  ArrayConfig() = default;
  ArrayConfig(int n, Real d, RadiationPattern pat = RadiationPattern::isotropic())
      : n_elements(n), spacing(d), pattern(pat) {
    if (n_elements < 1) throw std::invalid_argument("array needs at least one element");
    if (!(spacing > 0.0)) throw std::invalid_argument("element spacing must be positive");
  }

  /// Full beam gain N * g0, the unconditional upper bound under ZF.
  Real full_gain() const { return n_elements * pattern.peak_gain(); }
};

/// Element gain for a given cosine of the off-boresight angle. The cosine
/// model radiates only over the front hemisphere (cos_eps >= 0).
inline Real pattern_gain(const RadiationPattern& pattern, Real cos_eps) {
  if (pattern.kind == RadiationPattern::Kind::Isotropic) return 1.0;
  if (cos_eps <= 0.0) return 0.0;
  return pattern.peak_gain() * std::pow(cos_eps, 2.0 * pattern.directivity);
}

inline Real pattern_gain(const ArrayConfig& array, const ArrayRotation& r, Direction theta) {
  return pattern_gain(array.pattern, element_pattern_cos(r, theta));
}

/// Geometric steering vector: entry n is exp(j * 2*pi * n * d * cos(phi))
/// with cos(phi) the post-rotation AoD cosine. Entries have unit magnitude.
inline CVec geometric_steering(const ArrayConfig& array, const ArrayRotation& r,
                               Direction theta) {
  const Real cos_phi = rotated_aod_cos(r, theta);
  const Real step = kTwoPi * array.spacing * cos_phi;
  CVec a(array.n_elements);
  for (int n = 0; n < array.n_elements; ++n) a(n) = std::polar(1.0, step * n);
  return a;
}

/// Effective steering vector: geometric steering scaled by sqrt of the
/// element gain toward theta. Squared norm is N * g(r, eps(theta)).
inline CVec effective_steering(const ArrayConfig& array, const ArrayRotation& r,
                               Direction theta) {
  const Real g = pattern_gain(array, r, theta);
  if (array.pattern.kind == RadiationPattern::Kind::Isotropic)
    return geometric_steering(array, r, theta);
  return std::sqrt(g) * geometric_steering(array, r, theta);
}

/// Hermitian inner product a^H * b of two steering vectors.
inline Complex steering_inner_product(const Eigen::Ref<const CVec>& a,
                                      const Eigen::Ref<const CVec>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("steering_inner_product: length mismatch");
  return a.dot(b);
}

/// Closed form of the same inner product for two geometric steering vectors
/// whose AoD cosines differ by delta_cos:
///   exp(j*(N-1)*pi*d*delta) * sin(N*pi*d*delta) / sin(pi*d*delta).
/// The removable singularity at integer d*delta is evaluated by its limit
/// +-N so the main lobe never divides zero by zero.
inline Complex dirichlet_inner_product(int n_elements, Real spacing, Real delta_cos) {
  const Real x = kPi * spacing * delta_cos;
  const Real denom = std::sin(x);
  const Complex phase = std::polar(1.0, (n_elements - 1) * x);
  if (std::abs(denom) < 1e-12) {
    const Real k = std::round(spacing * delta_cos);
    const bool negate = (static_cast<long long>(k) * (n_elements - 1)) % 2 != 0;
    return phase * static_cast<Real>(negate ? -n_elements : n_elements);
  }
  return phase * (std::sin(n_elements * x) / denom);
}

}  // namespace raa
