#pragma once

#include "raa/beamform.hpp"
#include "raa/types.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace raa {

/// Point of the discretized rotation space: per-dimension indices into the
/// uniform grid 2*pi*i/Q, i = 0..Q-1.
struct GridIndex {
  int alpha = 0;
  int beta = 0;
  int gamma = 0;

  bool operator==(const GridIndex&) const = default;
};

struct ScoredPoint {
  GridIndex point;
  Real gain = 0.0;
};

enum class InitMode { Foa, RandomGrid, Given };
enum class OptimizerPhase { SequentialUpdate, GibbsSampling };

struct OptimizerConfig {
  int q_grid = 360;     // sampling points per angular dimension
  int rounds = 5;       // sequential-update rounds
  int gs_iters = 50;    // Gibbs iterations per round
  int candidates = 36;  // candidates per Gibbs iteration
  int max_shift = 3;    // adjacent-shift radius in grid steps
  Real mu = 1.0;        // Gibbs temperature
  std::uint64_t seed = 1;
  InitMode init = InitMode::Foa;
  ArrayRotation init_point{};  // used when init == Given (snapped to the grid)
};

struct TraceRecord {
  int round = 0;
  OptimizerPhase phase = OptimizerPhase::SequentialUpdate;
  Real gain = 0.0;
};

struct OptimizerResult {
  ArrayRotation best_arv;
  Real best_gain = 0.0;
  BeamWeights weights;
  std::vector<TraceRecord> trace;
  std::uint64_t evaluations = 0;
};

struct MonteCarloRow {
  int k = 0;
  Real mean_gain_raa = 0.0;
  Real mean_gain_foa = 0.0;
  Real std_raa = 0.0;
  Real std_foa = 0.0;
  int trials = 0;
  std::vector<Real> raa_trials;  // per-trial gains, trial order
  std::vector<Real> foa_trials;
};

/// Grid angle 2*pi*index/q_grid; index 0 is angle 0, 2*pi is excluded.
Real grid_angle(int index, int q_grid);

ArrayRotation grid_rotation(const GridIndex& index, int q_grid);

/// Nearest grid point to a continuous rotation (per-dimension rounding,
/// wrapping at the seam).
GridIndex snap_to_grid(const ArrayRotation& r, int q_grid);

/// Counting wrapper around the ZF gain objective. Rank-deficient rotations
/// score zero; the failure count lets the optimizer distinguish a fully
/// degenerate problem from isolated bad points.
class ZfObjective {
 public:
  ZfObjective(ArrayConfig array, NullSteerProblem prob, int q_grid);

  Real operator()(const GridIndex& index);

  std::uint64_t evaluations() const { return evaluations_; }
  std::uint64_t singular_failures() const { return singular_; }

 private:
  ArrayConfig array_;
  NullSteerProblem prob_;
  int q_grid_;
  std::uint64_t evaluations_ = 0;
  std::uint64_t singular_ = 0;
};

/// One candidate index drawn with probability proportional to
/// exp(mu * gain), shifted by the maximum for numerical stability.
int softmax_select(std::span<const Real> gains, Real mu, std::mt19937_64& rng);

/// Deterministic per-trial seed derivation for Monte-Carlo fan-out.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k, std::uint64_t trial);

/// Three exhaustive one-dimensional sweeps in the order alpha, beta, gamma,
/// each holding the other two coordinates at their latest values. Ties break
/// toward the lowest grid index; the output never scores below the input.
ScoredPoint sequential_update_round(const GridIndex& start, ZfObjective& objective,
                                    int q_grid);

/// Gibbs exploration: per iteration, 6*max_shift adjacent candidates (one
/// coordinate shifted by -J..J with wraparound) plus uniformly random grid
/// points up to `candidates` total; one candidate is kept per iteration by
/// softmax selection and the best of the whole history (seeded with `start`
/// and any `extra_history`) is returned.
ScoredPoint gibbs_phase(const ScoredPoint& start, ZfObjective& objective,
                        const OptimizerConfig& cfg, std::mt19937_64& rng,
                        std::span<const ScoredPoint> extra_history = {});

/// Alternates sequential-update rounds with Gibbs phases for cfg.rounds
/// rounds. The unrotated (fixed-orientation) point is always evaluated and
/// kept in the running, so the result never scores below it. Deterministic
/// for a fixed seed; evaluation count is exactly
/// 1 + rounds * (3 * q_grid + gs_iters * candidates).
OptimizerResult optimize(const ArrayConfig& array, const NullSteerProblem& prob,
                         const OptimizerConfig& cfg);

/// Monte-Carlo sweep over interference counts: per trial, draws K directions
/// uniformly (redrawing any within 1e-6 rad of the desired direction or of
/// each other), optimizes the rotation and records the fixed-orientation
/// baseline. Trials fan out over `threads` workers (0 = hardware concurrency)
/// with per-trial derived seeds, so the output is thread-count independent.
std::vector<MonteCarloRow> monte_carlo(const ArrayConfig& array, Direction desired,
                                       std::span<const int> k_values, int trials,
                                       const OptimizerConfig& cfg,
                                       std::uint64_t base_seed, int threads = 0);

}  // namespace raa
