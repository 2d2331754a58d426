#include "raa/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace raa {

namespace {

constexpr Real kSlack = 1e-9;
// Beyond this many kernel-integer tuples, stop enumerating once a witness
// has been verified instead of filling the complete integer sets.
constexpr long long kTupleCap = 2'000'000;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// Kernel integers up to |m| <= bound, smallest magnitude first, positive
/// before negative, skipping multiples of N (grating peaks).
std::vector<int> kernel_integers(Real bound, int n_elements) {
  std::vector<int> out;
  const int cap = static_cast<int>(std::floor(bound + kSlack));
  for (int m = 1; m <= cap; ++m) {
    if (m % n_elements == 0) continue;
    out.push_back(m);
    out.push_back(-m);
  }
  return out;
}

bool geometric_orthogonal(const ArrayConfig& array, const ArrayRotation& r,
                          Direction theta0, Direction theta_k) {
  const CVec a0 = geometric_steering(array, r, theta0);
  const CVec ak = geometric_steering(array, r, theta_k);
  return std::abs(steering_inner_product(ak, a0)) < 1e-9 * array.n_elements;
}

/// Full-gain verification through the beamformer; empty when the rotation
/// does not reach N * g0 within 1e-9 relative (or the Gram degenerates).
std::optional<Real> verify_full_gain(const ArrayConfig& array, const ArrayRotation& r,
                                     Direction theta0,
                                     std::span<const Direction> interferers) {
  NullSteerProblem prob{theta0, {interferers.begin(), interferers.end()}};
  try {
    const Real gain = zf_gain(array, r, prob);
    const Real full = array.full_gain();
    if (std::abs(gain - full) <= 1e-9 * full) return gain;
  } catch (const BeamformError&) {
  }
  return std::nullopt;
}

NullMechanism classify_directional(const ArrayConfig& array, Real sep) {
  const auto thr = directional_geometric_threshold(array);
  const bool geo = thr && (in_closed_interval(sep, *thr, kPi - *thr) ||
                           in_closed_interval(sep, kPi + *thr, kTwoPi - *thr));
  const bool null = in_closed_interval(sep, kPi / 2, 3 * kPi / 2);
  if (geo && null) return NullMechanism::Both;
  if (geo) return NullMechanism::GeometricOrthogonality;
  if (null) return NullMechanism::PatternNull;
  return NullMechanism::None;
}

}  // namespace

std::optional<Real> isotropic_min_separation(const ArrayConfig& array) {
  const Real x = 1.0 / (2.0 * array.n_elements * array.spacing);
  if (x > 1.0) return std::nullopt;
  return 2.0 * std::asin(x);
}

std::optional<Real> directional_geometric_threshold(const ArrayConfig& array) {
  const Real x = 1.0 / (array.n_elements * array.spacing);
  if (x > 1.0) return std::nullopt;
  return std::asin(x);
}

ArrayRotation isotropic_single_solve(const ArrayConfig& array, Direction theta0,
                                     Direction theta1, int m) {
  require(array.n_elements > 1, "isotropic_single_solve requires more than one element");
  if (m == 0 || m % array.n_elements == 0)
    throw InfeasibleMError("kernel integer is a grating peak, not a zero");
  const Real midpoint = 0.5 * (theta0.theta + theta1.theta);
  const Real half_sine = std::sin(0.5 * (theta0.theta - theta1.theta));
  // gamma maximizing |sin(gamma + midpoint)|; the remaining solutions form a
  // one-parameter family around it.
  const Real gamma = kPi / 2 - midpoint;
  const Real denom = 2.0 * array.n_elements * array.spacing *
                     std::sin(gamma + midpoint) * half_sine;
  if (std::abs(denom) < 1e-15)
    throw InfeasibleMError("coincident directions admit no kernel zero");
  const Real cos_beta = m / denom;
  if (std::abs(cos_beta) > 1.0 + kSlack)
    throw InfeasibleMError("kernel integer exceeds the feasible range");
  return {0.0, std::acos(std::clamp(cos_beta, -1.0, 1.0)), gamma};
}

FeasibilityReport isotropic_single_feasibility(const ArrayConfig& array,
                                               Direction theta0, Direction theta1) {
  require(array.n_elements > 1, "single-interferer analysis requires more than one element");
  require(array.pattern.kind == RadiationPattern::Kind::Isotropic,
          "this analysis covers isotropic patterns; use the directional solver instead");
  FeasibilityReport rep;
  rep.mechanism = {NullMechanism::None};

  const Real bound = 2.0 * array.n_elements * array.spacing *
                     std::abs(std::sin(0.5 * (theta0.theta - theta1.theta)));
  const std::vector<int> candidates = kernel_integers(bound, array.n_elements);
  rep.integer_sets = {candidates};
  std::sort(rep.integer_sets[0].begin(), rep.integer_sets[0].end());

  const Real sep = angular_separation(theta0, theta1);
  const auto thr = isotropic_min_separation(array);
  if (!thr || !in_closed_interval(sep, *thr, kTwoPi - *thr)) return rep;

  for (int m : candidates) {
    try {
      const ArrayRotation r = isotropic_single_solve(array, theta0, theta1, m);
      if (!geometric_orthogonal(array, r, theta0, theta1)) continue;
      if (rep.witness) continue;
      const std::array<Direction, 1> ks{theta1};
      if (auto gain = verify_full_gain(array, r, theta0, ks)) {
        rep.feasible = true;
        rep.witness = r;
        rep.achieved_gain = *gain;
        rep.mechanism = {NullMechanism::GeometricOrthogonality};
      }
    } catch (const InfeasibleMError&) {
      continue;
    }
  }
  return rep;
}

CollinearityData collinearity_data(Direction theta0,
                                   std::span<const Direction> interferers,
                                   std::span<const int> m_tuple) {
  require(interferers.size() == m_tuple.size(),
          "one kernel integer per interferer required");
  require(!interferers.empty(), "collinearity data needs interferers");
  CollinearityData data;
  const size_t k = interferers.size();
  data.midpoint.resize(k);
  data.half_sine.resize(k);
  for (size_t i = 0; i < k; ++i) {
    data.midpoint[i] = 0.5 * (theta0.theta + interferers[i].theta);
    data.half_sine[i] = std::sin(0.5 * (theta0.theta - interferers[i].theta));
  }
  for (size_t i = 1; i < k; ++i) {
    const Real m_term = m_tuple[0] * data.half_sine[i] * std::cos(data.midpoint[i]) -
                        m_tuple[i] * data.half_sine[0] * std::cos(data.midpoint[0]);
    const Real n_term = m_tuple[0] * data.half_sine[i] * std::sin(data.midpoint[i]) -
                        m_tuple[i] * data.half_sine[0] * std::sin(data.midpoint[0]);
    data.m_cross.push_back(m_term);
    data.n_cross.push_back(n_term);
  }
  for (size_t i = 0; i < data.m_cross.size(); ++i) {
    if (std::abs(data.n_cross[i]) > 1e-12) {
      data.eta = data.m_cross[i] / data.n_cross[i];
      break;
    }
  }
  return data;
}

FeasibilityReport isotropic_multi_solve(const ArrayConfig& array, Direction theta0,
                                        std::span<const Direction> interferers) {
  require(array.n_elements > 1, "multi-interferer analysis requires more than one element");
  require(array.pattern.kind == RadiationPattern::Kind::Isotropic,
          "this analysis covers isotropic patterns; use the directional solver instead");
  require(interferers.size() >= 2,
          "multi-interferer analysis needs K >= 2; use the single-interferer solver");

  const size_t k = interferers.size();
  FeasibilityReport rep;
  rep.mechanism.assign(k, NullMechanism::None);
  rep.integer_sets.assign(k, {});

  const Real two_nd = 2.0 * array.n_elements * array.spacing;
  std::vector<Real> midpoint(k), half_sine(k);
  std::vector<std::vector<int>> candidates(k);
  long long space = 1;
  for (size_t i = 0; i < k; ++i) {
    midpoint[i] = 0.5 * (theta0.theta + interferers[i].theta);
    half_sine[i] = std::sin(0.5 * (theta0.theta - interferers[i].theta));
    const Real bound = std::min(two_nd * std::abs(half_sine[i]), two_nd);
    candidates[i] = kernel_integers(bound, array.n_elements);
    if (candidates[i].empty()) return rep;  // no kernel zero reaches this interferer
    space *= static_cast<long long>(candidates[i].size());
    if (space > kTupleCap) space = kTupleCap + 1;
  }
  const bool exhaustive = space <= kTupleCap;

  std::vector<std::vector<int>> verified_sets(k);
  std::vector<size_t> odo(k, 0);
  std::vector<int> tuple(k);
  while (true) {
    for (size_t i = 0; i < k; ++i) tuple[i] = candidates[i][odo[i]];

    // Cross terms pairing interferer 1 with each other interferer; a common
    // gamma exists only when they are pairwise collinear.
    std::vector<Real> m_cross(k - 1), n_cross(k - 1);
    for (size_t i = 1; i < k; ++i) {
      m_cross[i - 1] = tuple[0] * half_sine[i] * std::cos(midpoint[i]) -
                       tuple[i] * half_sine[0] * std::cos(midpoint[0]);
      n_cross[i - 1] = tuple[0] * half_sine[i] * std::sin(midpoint[i]) -
                       tuple[i] * half_sine[0] * std::sin(midpoint[0]);
    }
    bool collinear = true;
    for (size_t i = 0; i + 1 < m_cross.size() && collinear; ++i) {
      for (size_t j = i + 1; j < m_cross.size() && collinear; ++j) {
        const Real cross = m_cross[i] * n_cross[j] - m_cross[j] * n_cross[i];
        const Real scale = std::max({1.0, std::abs(m_cross[i] * n_cross[j]),
                                     std::abs(m_cross[j] * n_cross[i])});
        collinear = std::abs(cross) <= 1e-9 * scale;
      }
    }

    if (collinear) {
      // gamma from the null direction of the first resolvable cross pair,
      // or the margin-maximizing choice when every pair degenerates.
      Real gamma_base = kPi / 2 - midpoint[0];
      for (size_t i = 0; i < m_cross.size(); ++i) {
        if (std::hypot(m_cross[i], n_cross[i]) > 1e-12) {
          gamma_base = std::atan2(-n_cross[i], m_cross[i]);
          break;
        }
      }
      for (Real gamma : {gamma_base, gamma_base + kPi}) {
        const Real denom = two_nd * std::sin(gamma + midpoint[0]) * half_sine[0];
        if (std::abs(denom) < 1e-12) continue;
        const Real cos_beta = tuple[0] / denom;
        if (std::abs(cos_beta) > 1.0 + kSlack) continue;
        const ArrayRotation r(0.0, std::acos(std::clamp(cos_beta, -1.0, 1.0)), gamma);
        bool all_orthogonal = true;
        for (size_t i = 0; i < k && all_orthogonal; ++i)
          all_orthogonal = geometric_orthogonal(array, r, theta0, interferers[i]);
        if (!all_orthogonal) continue;
        if (const auto gain = verify_full_gain(array, r, theta0, interferers)) {
          if (!rep.feasible) {
            rep.feasible = true;
            rep.witness = r;
            rep.achieved_gain = *gain;
            rep.mechanism.assign(k, NullMechanism::GeometricOrthogonality);
          }
          for (size_t i = 0; i < k; ++i) verified_sets[i].push_back(tuple[i]);
          break;
        }
      }
    }

    if (rep.feasible && !exhaustive) break;
    bool rolled_over = true;
    for (size_t pos = k; pos-- > 0;) {
      if (++odo[pos] < candidates[pos].size()) {
        rolled_over = false;
        break;
      }
      odo[pos] = 0;
    }
    if (rolled_over) break;
  }

  for (size_t i = 0; i < k; ++i) {
    auto& set = verified_sets[i];
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    rep.integer_sets[i] = std::move(set);
  }
  return rep;
}

FeasibilityReport directional_single_solve(const ArrayConfig& array, Direction theta0,
                                           Direction theta1) {
  require(array.n_elements > 1, "single-interferer analysis requires more than one element");
  require(array.pattern.kind == RadiationPattern::Kind::Cosine,
          "this analysis covers directional patterns; use the isotropic solver instead");
  FeasibilityReport rep;
  rep.integer_sets = {{}};

  const Real sep = angular_separation(theta0, theta1);
  const NullMechanism mech = classify_directional(array, sep);
  rep.mechanism = {mech};
  if (mech == NullMechanism::None) return rep;

  // Boresight-aligned branch: gamma + theta0 = pi/2 makes cos(eps(theta0)) = 1
  // with alpha = 0 independently of beta.
  const Real gamma = kPi / 2 - theta0.theta;
  const std::array<Direction, 1> ks{theta1};

  const bool geo_available = mech == NullMechanism::GeometricOrthogonality ||
                             mech == NullMechanism::Both;
  if (geo_available) {
    const Real sin_sep = std::sin(theta0.theta - theta1.theta);
    const Real nd = array.n_elements * array.spacing;
    rep.integer_sets = {kernel_integers(nd * std::abs(sin_sep), array.n_elements)};
    std::sort(rep.integer_sets[0].begin(), rep.integer_sets[0].end());
    for (int m : kernel_integers(nd * std::abs(sin_sep), array.n_elements)) {
      const Real cos_beta = m / (nd * sin_sep);
      if (std::abs(cos_beta) > 1.0 + kSlack) continue;
      const ArrayRotation r(0.0, std::acos(std::clamp(cos_beta, -1.0, 1.0)), gamma);
      if (const auto gain = verify_full_gain(array, r, theta0, ks)) {
        rep.feasible = true;
        rep.witness = r;
        rep.achieved_gain = *gain;
        return rep;
      }
    }
  }
  // Pattern-null branch: any beta works once the boresight is aligned.
  const ArrayRotation r(0.0, 0.0, gamma);
  if (const auto gain = verify_full_gain(array, r, theta0, ks)) {
    rep.feasible = true;
    rep.witness = r;
    rep.achieved_gain = *gain;
  }
  return rep;
}

BetaSolutionSet beta_solution_set(const ArrayConfig& array, Direction theta0,
                                  Direction theta_k) {
  const Real sep = angular_separation(theta0, theta_k);
  if (in_closed_interval(sep, kPi / 2, 3 * kPi / 2)) return {BetaSolutionSet::Kind::FullCircle, {}};

  BetaSolutionSet set{BetaSolutionSet::Kind::DiscreteCosines, {}};
  const auto thr = directional_geometric_threshold(array);
  const bool in_front_range =
      thr && (in_closed_interval(sep, *thr, kPi / 2) ||
              in_closed_interval(sep, 3 * kPi / 2, kTwoPi - *thr));
  if (!in_front_range) return set;  // empty: this interferer cannot be nulled

  const Real nd = array.n_elements * array.spacing;
  const Real sin_sep = std::sin(theta0.theta - theta_k.theta);
  if (std::abs(sin_sep) < 1e-12) return set;
  for (int m : kernel_integers(nd * std::abs(sin_sep), array.n_elements)) {
    const Real cos_beta = m / (nd * sin_sep);
    if (std::abs(cos_beta) <= 1.0 + kSlack)
      set.cos_values.push_back(std::clamp(cos_beta, -1.0, 1.0));
  }
  return set;
}

FeasibilityReport directional_multi_intersect(const ArrayConfig& array, Direction theta0,
                                              std::span<const Direction> interferers) {
  require(array.n_elements > 1, "multi-interferer analysis requires more than one element");
  require(array.pattern.kind == RadiationPattern::Kind::Cosine,
          "this analysis covers directional patterns; use the isotropic solver instead");
  require(interferers.size() >= 2,
          "multi-interferer analysis needs K >= 2; use the single-interferer solver");

  const size_t k = interferers.size();
  FeasibilityReport rep;
  rep.mechanism.resize(k);
  rep.integer_sets.assign(k, {});

  std::vector<BetaSolutionSet> sets(k);
  bool any_empty = false;
  for (size_t i = 0; i < k; ++i) {
    const Real sep = angular_separation(theta0, interferers[i]);
    rep.mechanism[i] = classify_directional(array, sep);
    sets[i] = beta_solution_set(array, theta0, interferers[i]);
    if (sets[i].kind == BetaSolutionSet::Kind::DiscreteCosines && sets[i].cos_values.empty())
      any_empty = true;
  }
  if (any_empty) return rep;

  // Intersect in cosine space; full-circle sets impose no constraint.
  std::vector<Real> intersection;
  bool unconstrained = true;
  for (size_t i = 0; i < k; ++i) {
    if (sets[i].kind != BetaSolutionSet::Kind::DiscreteCosines) continue;
    if (unconstrained) {
      intersection = sets[i].cos_values;
      unconstrained = false;
      continue;
    }
    std::vector<Real> next;
    for (Real v : intersection)
      for (Real w : sets[i].cos_values)
        if (std::abs(v - w) <= 1e-9) {
          next.push_back(v);
          break;
        }
    intersection = std::move(next);
  }
  if (!unconstrained && intersection.empty()) return rep;

  const Real gamma = kPi / 2 - theta0.theta;
  const Real nd = array.n_elements * array.spacing;
  std::vector<Real> beta_candidates = unconstrained ? std::vector<Real>{1.0} : intersection;
  for (Real cos_beta : beta_candidates) {
    const ArrayRotation r(0.0, std::acos(std::clamp(cos_beta, -1.0, 1.0)), gamma);
    if (const auto gain = verify_full_gain(array, r, theta0, interferers)) {
      rep.feasible = true;
      rep.witness = r;
      rep.achieved_gain = *gain;
      for (size_t i = 0; i < k; ++i) {
        if (sets[i].kind != BetaSolutionSet::Kind::DiscreteCosines) continue;
        for (Real v : unconstrained ? sets[i].cos_values : intersection) {
          const Real m_real = v * nd * std::sin(theta0.theta - interferers[i].theta);
          rep.integer_sets[i].push_back(static_cast<int>(std::llround(m_real)));
        }
        std::sort(rep.integer_sets[i].begin(), rep.integer_sets[i].end());
        rep.integer_sets[i].erase(
            std::unique(rep.integer_sets[i].begin(), rep.integer_sets[i].end()),
            rep.integer_sets[i].end());
      }
      return rep;
    }
  }
  return rep;
}

ArrayRotation symmetric_pair_solve(const ArrayConfig& array, Direction theta0,
                                   Real half_separation, int m) {
  require(array.n_elements > 1, "symmetric construction requires more than one element");
  if (m == 0 || m % array.n_elements == 0)
    throw InfeasibleMError("kernel integer is a grating peak, not a zero");
  const Real nd = array.n_elements * array.spacing;
  const Real sin_sep = std::sin(half_separation);
  if (std::abs(sin_sep) < 1e-15)
    throw InfeasibleMError("coincident symmetric pair admits no kernel zero");
  const Real cos_beta = m / (nd * sin_sep);
  if (std::abs(cos_beta) > 1.0 + kSlack)
    throw InfeasibleMError("kernel integer exceeds the feasible range");
  return {0.0, std::acos(std::clamp(cos_beta, -1.0, 1.0)), kPi / 2 - theta0.theta};
}

FoaOrthogonality foa_orthogonality_check(const ArrayConfig& array,
                                         Direction theta0, Direction theta1) {
  const Real x = array.n_elements * array.spacing *
                 (std::cos(theta0.theta) - std::cos(theta1.theta));
  const long long m = std::llround(x);
  const bool integral = std::abs(x - m) <= kSlack;
  return {integral && m % array.n_elements != 0, static_cast<int>(m)};
}

}  // namespace raa
