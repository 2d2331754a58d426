#pragma once

#include "raa/steering.hpp"
#include "raa/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace raa {

/// Desired direction plus the interference directions to null.
struct NullSteerProblem {
  Direction desired;
  std::vector<Direction> interferers;
};

class BeamformError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Desired steering vector lies (numerically) inside the interference
/// subspace; ZF weights are undefined. The ZF gain is still well defined as
/// the limit 0.
class DegenerateDesiredError : public BeamformError {
 public:
  DegenerateDesiredError()
      : BeamformError("DegenerateDesired: desired direction lies in the interference subspace") {}
};

/// Interference Gram matrix is numerically rank deficient (condition number
/// above 1e12 after pattern-null filtering).
class SingularGramError : public BeamformError {
 public:
  SingularGramError()
      : BeamformError("SingularGram: interference steering matrix is numerically rank deficient") {}
};

/// Unit-norm beamforming weights.
struct BeamWeights {
  CVec w;

  explicit BeamWeights(CVec weights) : w(std::move(weights)) {
    const Real norm = w.norm();
    if (!(norm > 0.0)) throw std::invalid_argument("beam weights must be nonzero");
    w /= norm;
  }
};

namespace detail {

/// Shared ZF setup: filters pattern-nulled interferers, builds the geometric
/// interference matrix and factors its Gram matrix. The projection operator
/// depends only on geometric steering vectors (the pattern diagonal cancels),
/// so columns are geometric even for directional elements.
struct ZfDecomposition {
  CVec desired_effective;       // a~(r, theta0)
  CMat interference;            // geometric columns, retained interferers only
  Eigen::LDLT<CMat> gram_ldlt;  // factorization of A^H A
  int retained = 0;

  ZfDecomposition(const ArrayConfig& array, const ArrayRotation& r,
                  const NullSteerProblem& prob) {
    const Real g0 = array.pattern.peak_gain();
    std::vector<int> keep;
    keep.reserve(prob.interferers.size());
    for (int k = 0; k < static_cast<int>(prob.interferers.size()); ++k) {
      // Interferers already nulled by the element pattern need no ZF column.
      if (pattern_gain(array, r, prob.interferers[k]) >= 1e-12 * g0) keep.push_back(k);
    }
    retained = static_cast<int>(keep.size());
    if (retained >= array.n_elements)
      throw std::invalid_argument("zero-forcing requires fewer active interferers than elements");

    desired_effective = effective_steering(array, r, prob.desired);
    interference.resize(array.n_elements, retained);
    for (int c = 0; c < retained; ++c)
      interference.col(c) = geometric_steering(array, r, prob.interferers[keep[c]]);

    if (retained > 0) {
      const CMat gram = interference.adjoint() * interference;
      Eigen::SelfAdjointEigenSolver<CMat> eig(gram, Eigen::EigenvaluesOnly);
      const auto& ev = eig.eigenvalues();
      if (ev(0) <= 0.0 || ev(ev.size() - 1) > 1e12 * ev(0)) throw SingularGramError();
      gram_ldlt.compute(gram);
    }
  }

  /// P_perp * a~(theta0) = a~(theta0) - A (A^H A)^-1 A^H a~(theta0).
  CVec projected_desired() const {
    if (retained == 0) return desired_effective;
    const CVec coeffs = gram_ldlt.solve(interference.adjoint() * desired_effective);
    return desired_effective - interference * coeffs;
  }
};

}  // namespace detail

/// Optimal ZF beamforming weights for a given rotation: the normalized
/// projection of the effective desired steering vector onto the orthogonal
/// complement of the (geometric) interference subspace.
inline BeamWeights zf_weights(const ArrayConfig& array, const ArrayRotation& r,
                              const NullSteerProblem& prob) {
  detail::ZfDecomposition zf(array, r, prob);
  CVec w = zf.projected_desired();
  const Real floor = 1e-12 * std::sqrt(array.full_gain());
  if (w.norm() < floor) throw DegenerateDesiredError();
  return BeamWeights(std::move(w));
}

/// ZF-induced beam gain over the desired direction,
///   g(r, eps(theta0)) * (N - a0^H A (A^H A)^-1 A^H a0),
/// evaluated with geometric quantities only. Returns 0 for a degenerate
/// desired direction instead of throwing, so it is a total objective.
inline Real zf_gain(const ArrayConfig& array, const ArrayRotation& r,
                    const NullSteerProblem& prob) {
  detail::ZfDecomposition zf(array, r, prob);
  const Real g_desired = pattern_gain(array, r, prob.desired);
  if (g_desired <= 0.0) return 0.0;
  Real quad = 0.0;
  if (zf.retained > 0) {
    const CVec geo = geometric_steering(array, r, prob.desired);
    const CVec proj = zf.interference.adjoint() * geo;
    quad = proj.dot(zf.gram_ldlt.solve(proj)).real();
  }
  const Real gain = g_desired * (array.n_elements - quad);
  return gain > 0.0 ? gain : 0.0;
}

/// Beam gain |a~(r, theta)^H w|^2 of arbitrary unit-norm weights.
inline Real beam_gain(const ArrayConfig& array, const ArrayRotation& r,
                      const BeamWeights& weights, Direction theta) {
  return std::norm(steering_inner_product(effective_steering(array, r, theta), weights.w));
}

/// Element-wise beam gain over a direction grid, order preserving.
inline std::vector<std::pair<Direction, Real>> beam_pattern(
    const ArrayConfig& array, const ArrayRotation& r, const BeamWeights& weights,
    std::span<const Direction> grid) {
  if (grid.empty()) throw std::invalid_argument("beam_pattern: empty direction grid");
  std::vector<std::pair<Direction, Real>> out;
  out.reserve(grid.size());
  for (const Direction& theta : grid)
    out.emplace_back(theta, beam_gain(array, r, weights, theta));
  return out;
}

}  // namespace raa
