#pragma once

#include "raa/beamform.hpp"
#include "raa/types.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace raa {

/// How an interference direction can be suppressed while the desired
/// direction keeps full gain.
enum class NullMechanism { GeometricOrthogonality, PatternNull, Both, None };

/// Outcome of a closed-form feasibility analysis. When feasible, the witness
/// rotation achieves the full beam gain N * g0 (verified numerically through
/// the ZF gain before being reported).
struct FeasibilityReport {
  bool feasible = false;
  std::vector<NullMechanism> mechanism;        // per interferer
  std::vector<std::vector<int>> integer_sets;  // feasible kernel integers per interferer
  std::optional<ArrayRotation> witness;
  Real achieved_gain = 0.0;
};

/// Intermediate quantities of the multi-interferer collinearity condition.
/// midpoint[i] = (theta0 + theta_i)/2, half_sine[i] = sin((theta0 - theta_i)/2);
/// m_cross/n_cross hold the cross terms pairing interferer 1 with interferer
/// i (i >= 2), and eta is their common ratio when one is resolvable.
struct CollinearityData {
  std::vector<Real> midpoint;
  std::vector<Real> half_sine;
  std::vector<Real> m_cross;
  std::vector<Real> n_cross;
  Real eta = 0.0;
};

/// Solution set for the y-axis rotation that nulls one interferer under a
/// directional pattern: a discrete set of cosines (geometric orthogonality)
/// or the full circle (interferer falls outside the element main lobe).
struct BetaSolutionSet {
  enum class Kind { DiscreteCosines, FullCircle };
  Kind kind = Kind::DiscreteCosines;
  std::vector<Real> cos_values;
};

struct FoaOrthogonality {
  bool orthogonal = false;
  int nearest_m = 0;
};

/// Requested kernel integer cannot produce |cos(beta)| <= 1 (or indexes a
/// grating peak rather than a Dirichlet zero).
class InfeasibleMError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smallest angular separation with a feasible rotation under an isotropic
/// pattern: 2*asin(1/(2Nd)). Empty when even the widest separation admits no
/// kernel zero (2Nd < 1).
std::optional<Real> isotropic_min_separation(const ArrayConfig& array);

/// Smallest separation admitting geometric orthogonality together with a
/// boresight-aligned directional pattern: asin(1/(Nd)). Empty when Nd < 1.
std::optional<Real> directional_geometric_threshold(const ArrayConfig& array);

/// Single interferer, isotropic pattern: separation test plus the feasible
/// kernel integers, with a verified witness rotation when feasible.
FeasibilityReport isotropic_single_feasibility(const ArrayConfig& array,
                                               Direction theta0, Direction theta1);

/// Witness construction for a chosen kernel integer m: gamma maximizes the
/// kernel margin, beta follows in closed form, alpha is irrelevant and set 0.
ArrayRotation isotropic_single_solve(const ArrayConfig& array, Direction theta0,
                                     Direction theta1, int m);

/// Multiple interferers, isotropic pattern: enumerates kernel integer tuples,
/// screens them by the collinearity (constant-ratio) condition, constructs
/// (beta, gamma) for consistent tuples and verifies every orthogonality
/// numerically. Exhaustive within the per-integer bound |m| <= 2Nd; once the
/// enumeration space exceeds an internal cap the search stops after the
/// first verified witness.
FeasibilityReport isotropic_multi_solve(const ArrayConfig& array, Direction theta0,
                                        std::span<const Direction> interferers);

/// Single interferer, directional (cosine) pattern: mechanism classification
/// and a witness that keeps the element boresight on the desired direction.
FeasibilityReport directional_single_solve(const ArrayConfig& array, Direction theta0,
                                           Direction theta1);

/// Multiple interferers, directional pattern: per-interferer beta solution
/// sets intersected in cosine space.
FeasibilityReport directional_multi_intersect(const ArrayConfig& array, Direction theta0,
                                              std::span<const Direction> interferers);

/// Dedicated construction for two interferers symmetric about the desired
/// direction (theta0 -+ half separation): opposite kernel integers share the
/// same beta, gamma aligns the boresight. Valid for both pattern models.
ArrayRotation symmetric_pair_solve(const ArrayConfig& array, Direction theta0,
                                   Real half_separation, int m);

/// Collinearity quantities for a given kernel integer tuple (one integer per
/// interferer; interferer 1 is the reference).
CollinearityData collinearity_data(Direction theta0,
                                   std::span<const Direction> interferers,
                                   std::span<const int> m_tuple);

/// Beta solution set for one interferer under the directional model.
BetaSolutionSet beta_solution_set(const ArrayConfig& array, Direction theta0,
                                  Direction theta_k);

/// Fixed-orientation orthogonality test: Nd*(cos(theta0) - cos(theta1)) must
/// be an integer not divisible by N.
FoaOrthogonality foa_orthogonality_check(const ArrayConfig& array,
                                         Direction theta0, Direction theta1);

}  // namespace raa
