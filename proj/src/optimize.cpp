#include "raa/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace raa {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

int wrap_index(int index, int q_grid) {
  const int r = index % q_grid;
  return r < 0 ? r + q_grid : r;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits of the generator.
Real uniform_unit(std::mt19937_64& rng) {
  return static_cast<Real>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform grid index in [0, q). The modulo bias is ~q/2^64 and irrelevant
/// next to the need for a generator-independent, reproducible draw.
int uniform_index(std::mt19937_64& rng, int q) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(q));
}

}  // namespace

Real grid_angle(int index, int q_grid) {
  if (index < 0 || index >= q_grid) throw std::out_of_range("grid index outside [0, Q)");
  return kTwoPi * index / q_grid;
}

ArrayRotation grid_rotation(const GridIndex& index, int q_grid) {
  return {grid_angle(index.alpha, q_grid), grid_angle(index.beta, q_grid),
          grid_angle(index.gamma, q_grid)};
}

GridIndex snap_to_grid(const ArrayRotation& r, int q_grid) {
  const Real step = kTwoPi / q_grid;
  auto snap = [&](Real angle) {
    return wrap_index(static_cast<int>(std::lround(angle / step)), q_grid);
  };
  return {snap(r.alpha), snap(r.beta), snap(r.gamma)};
}

ZfObjective::ZfObjective(ArrayConfig array, NullSteerProblem prob, int q_grid)
    : array_(std::move(array)), prob_(std::move(prob)), q_grid_(q_grid) {}

Real ZfObjective::operator()(const GridIndex& index) {
  ++evaluations_;
  try {
    return zf_gain(array_, grid_rotation(index, q_grid_), prob_);
  } catch (const SingularGramError&) {
    ++singular_;
    return 0.0;
  }
}

int softmax_select(std::span<const Real> gains, Real mu, std::mt19937_64& rng) {
  require(!gains.empty(), "softmax selection needs candidates");
  Real top = gains[0];
  for (Real g : gains) top = std::max(top, g);
  std::vector<Real> weights(gains.size());
  Real total = 0.0;
  for (size_t i = 0; i < gains.size(); ++i) {
    weights[i] = std::exp(mu * (gains[i] - top));
    total += weights[i];
  }
  const Real u = uniform_unit(rng) * total;
  Real cumulative = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    cumulative += weights[i];
    if (u < cumulative) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k, std::uint64_t trial) {
  return splitmix64(splitmix64(splitmix64(base) ^ k) ^ trial);
}

ScoredPoint sequential_update_round(const GridIndex& start, ZfObjective& objective,
                                    int q_grid) {
  GridIndex current = start;
  Real best = 0.0;
  for (int coord = 0; coord < 3; ++coord) {
    int* field = coord == 0 ? &current.alpha : coord == 1 ? &current.beta : &current.gamma;
    int arg = 0;
    best = -1.0;
    for (int i = 0; i < q_grid; ++i) {
      *field = i;
      const Real gain = objective(current);
      if (gain > best) {
        best = gain;
        arg = i;
      }
    }
    *field = arg;
  }
  return {current, best};
}

ScoredPoint gibbs_phase(const ScoredPoint& start, ZfObjective& objective,
                        const OptimizerConfig& cfg, std::mt19937_64& rng,
                        std::span<const ScoredPoint> extra_history) {
  std::vector<ScoredPoint> history;
  history.reserve(cfg.gs_iters + 1 + extra_history.size());
  history.push_back(start);
  history.insert(history.end(), extra_history.begin(), extra_history.end());

  GridIndex current = start.point;
  std::vector<GridIndex> candidates;
  std::vector<Real> gains;
  for (int t = 0; t < cfg.gs_iters; ++t) {
    candidates.clear();
    // Adjacent candidates: one coordinate shifted by -J..J (wraparound).
    for (int coord = 0; coord < 3; ++coord) {
      for (int j = -cfg.max_shift; j <= cfg.max_shift; ++j) {
        if (j == 0) continue;
        GridIndex shifted = current;
        int* field = coord == 0 ? &shifted.alpha : coord == 1 ? &shifted.beta : &shifted.gamma;
        *field = wrap_index(*field + j, cfg.q_grid);
        candidates.push_back(shifted);
      }
    }
    // Remaining candidates drawn uniformly from the whole grid. All draws
    // happen before any evaluation so the selection stream is independent
    // of how the objective is computed.
    while (static_cast<int>(candidates.size()) < cfg.candidates) {
      candidates.push_back({uniform_index(rng, cfg.q_grid), uniform_index(rng, cfg.q_grid),
                            uniform_index(rng, cfg.q_grid)});
    }
    gains.clear();
    for (const GridIndex& c : candidates) gains.push_back(objective(c));
    const int pick = softmax_select(gains, cfg.mu, rng);
    current = candidates[pick];
    history.push_back({current, gains[pick]});
  }

  ScoredPoint best = history.front();
  for (const ScoredPoint& p : history)
    if (p.gain > best.gain) best = p;
  return best;
}

OptimizerResult optimize(const ArrayConfig& array, const NullSteerProblem& prob,
                         const OptimizerConfig& cfg) {
  require(cfg.q_grid >= 2, "grid needs at least two points per dimension");
  require(cfg.rounds >= 1, "at least one sequential-update round required");
  require(cfg.gs_iters >= 0, "negative Gibbs iteration count");
  require(6 * cfg.max_shift <= cfg.candidates,
          "adjacent candidates 6*max_shift must fit into the candidate budget");
  require(cfg.max_shift >= 1, "max_shift must be at least one grid step");
  require(cfg.mu > 0.0, "Gibbs temperature mu must be positive");

  std::mt19937_64 rng(cfg.seed);
  ZfObjective objective(array, prob, cfg.q_grid);

  const GridIndex foa_index{0, 0, 0};
  const ScoredPoint foa{foa_index, objective(foa_index)};

  GridIndex current = foa_index;
  switch (cfg.init) {
    case InitMode::Foa:
      break;
    case InitMode::RandomGrid:
      current = {uniform_index(rng, cfg.q_grid), uniform_index(rng, cfg.q_grid),
                 uniform_index(rng, cfg.q_grid)};
      break;
    case InitMode::Given:
      current = snap_to_grid(cfg.init_point, cfg.q_grid);
      break;
  }

  ScoredPoint best = foa;
  std::vector<TraceRecord> trace;
  trace.reserve(2 * cfg.rounds);
  ScoredPoint cursor{current, 0.0};
  for (int round = 1; round <= cfg.rounds; ++round) {
    cursor = sequential_update_round(cursor.point, objective, cfg.q_grid);
    trace.push_back({round, OptimizerPhase::SequentialUpdate, cursor.gain});
    if (cursor.gain > best.gain) best = cursor;

    // The fixed-orientation point joins the first Gibbs history, which makes
    // the final result dominate the FOA baseline for any initialization.
    const std::span<const ScoredPoint> extra =
        round == 1 ? std::span<const ScoredPoint>(&foa, 1) : std::span<const ScoredPoint>();
    cursor = gibbs_phase(cursor, objective, cfg, rng, extra);
    trace.push_back({round, OptimizerPhase::GibbsSampling, cursor.gain});
    if (cursor.gain > best.gain) best = cursor;
  }

  if (objective.singular_failures() == objective.evaluations()) throw SingularGramError();

  const ArrayRotation best_arv = grid_rotation(best.point, cfg.q_grid);
  return {best_arv, best.gain, zf_weights(array, best_arv, prob), std::move(trace),
          objective.evaluations()};
}

std::vector<MonteCarloRow> monte_carlo(const ArrayConfig& array, Direction desired,
                                       std::span<const int> k_values, int trials,
                                       const OptimizerConfig& cfg,
                                       std::uint64_t base_seed, int threads) {
  require(trials >= 1, "at least one Monte-Carlo trial required");
  for (int k : k_values)
    require(k >= 0 && k < array.n_elements, "interference count must satisfy 0 <= K < N");

  struct TrialOutcome {
    Real raa = 0.0;
    Real foa = 0.0;
  };
  const int n_k = static_cast<int>(k_values.size());
  std::vector<TrialOutcome> outcomes(static_cast<size_t>(n_k) * trials);

  auto run_trial = [&](int k_pos, int trial) {
    const int k = k_values[k_pos];
    const std::uint64_t seed = derive_seed(base_seed, static_cast<std::uint64_t>(k),
                                           static_cast<std::uint64_t>(trial));
    std::mt19937_64 draw_rng(seed);

    NullSteerProblem prob{desired, {}};
    Real foa_gain = 0.0;
    for (int attempt = 0; attempt < 100; ++attempt) {
      prob.interferers.clear();
      while (static_cast<int>(prob.interferers.size()) < k) {
        const Direction cand(kTwoPi * uniform_unit(draw_rng));
        bool clashes = std::abs(cand.theta - desired.theta) < 1e-6;
        for (const Direction& other : prob.interferers)
          clashes = clashes || std::abs(cand.theta - other.theta) < 1e-6;
        if (!clashes) prob.interferers.push_back(cand);
      }
      try {
        foa_gain = zf_gain(array, ArrayRotation{}, prob);
        break;
      } catch (const SingularGramError&) {
        // Rank-deficient draw (e.g. mirror-symmetric pair); perturb by redrawing.
        if (attempt == 99) throw;
      }
    }

    OptimizerConfig trial_cfg = cfg;
    trial_cfg.seed = splitmix64(seed);
    const OptimizerResult result = optimize(array, prob, trial_cfg);
    outcomes[static_cast<size_t>(k_pos) * trials + trial] = {result.best_gain, foa_gain};
  };

  const int hardware = static_cast<int>(std::thread::hardware_concurrency());
  const int n_workers = std::max(1, threads > 0 ? threads : hardware);
  const long long total = static_cast<long long>(n_k) * trials;
  if (n_workers == 1) {
    for (long long i = 0; i < total; ++i)
      run_trial(static_cast<int>(i / trials), static_cast<int>(i % trials));
  } else {
    std::atomic<long long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&] {
        for (long long i = next.fetch_add(1); i < total; i = next.fetch_add(1))
          run_trial(static_cast<int>(i / trials), static_cast<int>(i % trials));
      });
    }
    for (std::thread& t : pool) t.join();
  }

  std::vector<MonteCarloRow> rows;
  rows.reserve(n_k);
  for (int k_pos = 0; k_pos < n_k; ++k_pos) {
    MonteCarloRow row;
    row.k = k_values[k_pos];
    row.trials = trials;
    Real sum_raa = 0.0, sum_foa = 0.0;
    for (int t = 0; t < trials; ++t) {
      const TrialOutcome& o = outcomes[static_cast<size_t>(k_pos) * trials + t];
      row.raa_trials.push_back(o.raa);
      row.foa_trials.push_back(o.foa);
      sum_raa += o.raa;
      sum_foa += o.foa;
    }
    row.mean_gain_raa = sum_raa / trials;
    row.mean_gain_foa = sum_foa / trials;
    if (trials > 1) {
      Real var_raa = 0.0, var_foa = 0.0;
      for (int t = 0; t < trials; ++t) {
        const TrialOutcome& o = outcomes[static_cast<size_t>(k_pos) * trials + t];
        var_raa += (o.raa - row.mean_gain_raa) * (o.raa - row.mean_gain_raa);
        var_foa += (o.foa - row.mean_gain_foa) * (o.foa - row.mean_gain_foa);
      }
      row.std_raa = std::sqrt(var_raa / (trials - 1));
      row.std_foa = std::sqrt(var_foa / (trials - 1));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace raa
