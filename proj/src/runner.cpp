#include "runner.hpp"

#include "raa/analysis.hpp"
#include "raa/optimize.hpp"
#include "svg.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace raa::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(Real v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Real gain_db(Real linear) {
  // Exact nulls are -inf dB; everything below 1e-12 renders at the floor.
  return linear < 1e-12 ? -120.0 : 10.0 * std::log10(linear);
}

ArrayConfig array_from(const RunSpec& spec) {
  if (spec.pattern != "iso" && spec.pattern != "cos")
    throw std::invalid_argument("pattern must be 'iso' or 'cos'");
  const RadiationPattern pat = spec.pattern == "iso" ? RadiationPattern::isotropic()
                                                     : RadiationPattern::cosine(spec.p);
  return {spec.n, spec.spacing, pat};
}

NullSteerProblem problem_from(const RunSpec& spec) {
  NullSteerProblem prob{Direction::from_degrees(spec.theta0), {}};
  for (Real deg : spec.interferers) prob.interferers.push_back(Direction::from_degrees(deg));
  return prob;
}

OptimizerConfig optimizer_from(const RunSpec& spec) {
  OptimizerConfig cfg;
  cfg.q_grid = spec.q;
  cfg.rounds = spec.rounds;
  cfg.gs_iters = spec.gs_iters;
  cfg.candidates = spec.candidates;
  cfg.max_shift = spec.max_shift;
  cfg.mu = spec.mu;
  cfg.seed = spec.seed;
  return cfg;
}

std::pair<int, int> parse_k_range(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const int k = std::stoi(text);
      return {k, k};
    }
    const int lo = std::stoi(text.substr(0, colon));
    const int hi = std::stoi(text.substr(colon + 1));
    if (lo > hi) throw std::invalid_argument("");
    return {lo, hi};
  } catch (const std::exception&) {
    throw std::invalid_argument("k-range must be 'lo:hi' with lo <= hi");
  }
}

struct EmitSet {
  bool csv = false, json_out = false, svg_out = false;
};

EmitSet parse_emit(const std::string& text) {
  EmitSet set;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token == "csv") set.csv = true;
    else if (token == "json") set.json_out = true;
    else if (token == "svg") set.svg_out = true;
    else if (!token.empty()) throw std::invalid_argument("emit accepts csv, json, svg");
  }
  return set;
}

void write_file(const fs::path& path, const std::string& content,
                std::vector<std::string>& files) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  files.push_back(path.string());
}

json config_echo(const RunSpec& spec) {
  auto list = [](const std::vector<Real>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
    return s;
  };
  json cfg;
  cfg["n"] = std::to_string(spec.n);
  cfg["spacing"] = fmt(spec.spacing);
  cfg["pattern"] = spec.pattern;
  cfg["p"] = fmt(spec.p);
  cfg["theta0"] = fmt(spec.theta0);
  cfg["interferers"] = list(spec.interferers);
  cfg["arv"] = list(spec.arv);
  cfg["step"] = fmt(spec.step);
  cfg["q"] = std::to_string(spec.q);
  cfg["rounds"] = std::to_string(spec.rounds);
  cfg["gs-iters"] = std::to_string(spec.gs_iters);
  cfg["candidates"] = std::to_string(spec.candidates);
  cfg["max-shift"] = std::to_string(spec.max_shift);
  cfg["mu"] = fmt(spec.mu);
  cfg["seed"] = std::to_string(spec.seed);
  cfg["trials"] = std::to_string(spec.trials);
  cfg["k-range"] = spec.k_range;
  cfg["emit"] = spec.emit;
  cfg["threads"] = std::to_string(spec.threads);
  return cfg;
}

json base_record(const RunSpec& spec) {
  json record;
  record["command"] = spec.command;
  record["version"] = kToolVersion;
  record["config"] = config_echo(spec);
  return record;
}

class Stopwatch {
 public:
  Real elapsed_ms() const {
    return std::chrono::duration<Real, std::milli>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

std::string mechanism_name(NullMechanism m) {
  switch (m) {
    case NullMechanism::GeometricOrthogonality: return "geometric_orthogonality";
    case NullMechanism::PatternNull: return "pattern_null";
    case NullMechanism::Both: return "both";
    case NullMechanism::None: return "none";
  }
  return "none";
}

json report_to_json(const FeasibilityReport& rep) {
  json out;
  out["feasible"] = rep.feasible;
  out["mechanism"] = json::array();
  for (NullMechanism m : rep.mechanism) out["mechanism"].push_back(mechanism_name(m));
  out["integer_sets"] = rep.integer_sets;
  if (rep.witness) {
    out["witness_arv_deg"] = {rad_to_deg(rep.witness->alpha), rad_to_deg(rep.witness->beta),
                              rad_to_deg(rep.witness->gamma)};
    out["verified_gain"] = rep.achieved_gain;
  } else {
    out["witness_arv_deg"] = nullptr;
    out["verified_gain"] = nullptr;
  }
  return out;
}

/// Sweep axis in degrees: [-180, 180] inclusive at the requested step.
std::vector<Real> sweep_degrees(Real step) {
  if (!(step > 0.0)) throw std::invalid_argument("sweep step must be positive");
  std::vector<Real> out;
  const int n = static_cast<int>(std::lround(360.0 / step));
  if (n < 2) throw std::invalid_argument("sweep step too coarse");
  out.reserve(n + 1);
  for (int i = 0; i <= n; ++i) out.push_back(-180.0 + 360.0 * i / n);
  return out;
}

}  // namespace

std::string config_echo_text(const RunSpec& spec) {
  std::string text;
  for (const auto& [key, value] : config_echo(spec).items())
    text += key + "=" + value.get<std::string>() + "\n";
  return text;
}

RunOutput run_pattern(const RunSpec& spec) {
  Stopwatch watch;
  const ArrayConfig array = array_from(spec);
  const NullSteerProblem prob = problem_from(spec);
  if (spec.arv.size() != 3)
    throw std::invalid_argument("arv must hold three angles in degrees");
  const ArrayRotation rotation =
      ArrayRotation::from_degrees(spec.arv[0], spec.arv[1], spec.arv[2]);

  const BeamWeights weights = zf_weights(array, rotation, prob);
  const BeamWeights foa_weights = zf_weights(array, ArrayRotation{}, prob);

  const std::vector<Real> axis = sweep_degrees(spec.step);
  std::vector<Real> gain(axis.size()), foa_gain(axis.size());
  for (size_t i = 0; i < axis.size(); ++i) {
    const Direction theta = Direction::from_degrees(axis[i]);
    gain[i] = beam_gain(array, rotation, weights, theta);
    foa_gain[i] = beam_gain(array, ArrayRotation{}, foa_weights, theta);
  }

  const EmitSet emit = parse_emit(spec.emit);
  RunOutput output;
  output.record = base_record(spec);

  if (emit.csv) {
    std::string csv = "theta_deg,gain_linear,gain_db\n";
    for (size_t i = 0; i < axis.size(); ++i)
      csv += fmt(axis[i]) + "," + fmt(gain[i]) + "," + fmt(gain_db(gain[i])) + "\n";
    write_file(fs::path(spec.out) / "pattern.csv", csv, output.files);
  }

  if (emit.svg_out) {
    svg::ChartSpec chart;
    chart.title = "Beam pattern";
    chart.x_label = "angle of departure (deg)";
    chart.y_label = "beam gain (dB)";
    chart.x_min = -180.0;
    chart.x_max = 180.0;
    Real top = -120.0;
    for (Real g : gain) top = std::max(top, gain_db(g));
    for (Real g : foa_gain) top = std::max(top, gain_db(g));
    chart.y_min = -60.0;
    chart.y_max = std::ceil(top / 5.0) * 5.0 + 5.0;
    svg::Series raa{"rotated array", "#c02020", {}};
    svg::Series foa{"fixed orientation", "#2040c0", {}};
    for (size_t i = 0; i < axis.size(); ++i) {
      raa.points.emplace_back(axis[i], gain_db(gain[i]));
      foa.points.emplace_back(axis[i], gain_db(foa_gain[i]));
    }
    chart.series = {std::move(raa), std::move(foa)};
    auto marker_angle = [](Real deg) {
      const Real wrapped = rad_to_deg(wrap_two_pi(deg_to_rad(deg)));
      return wrapped >= 180.0 ? wrapped - 360.0 : wrapped;
    };
    chart.markers.push_back({"desired", "#208020", marker_angle(spec.theta0)});
    for (size_t k = 0; k < spec.interferers.size(); ++k)
      chart.markers.push_back({"interferer", "#808080", marker_angle(spec.interferers[k])});
    write_file(fs::path(spec.out) / "pattern.svg", svg::render_line_chart(chart), output.files);
  }

  json results;
  results["gain_at_theta0"] = beam_gain(array, rotation, weights, prob.desired);
  results["foa_gain_at_theta0"] = beam_gain(array, ArrayRotation{}, foa_weights, prob.desired);
  results["peak_gain"] = *std::max_element(gain.begin(), gain.end());
  json samples = json::array();
  for (size_t i = 0; i < axis.size(); ++i) samples.push_back({axis[i], gain[i]});
  results["pattern"] = std::move(samples);
  output.record["results"] = results;
  output.record["timing_ms"] = watch.elapsed_ms();

  if (emit.json_out)
    write_file(fs::path(spec.out) / "pattern.json", output.record.dump(2) + "\n", output.files);
  return output;
}

RunOutput run_analyze(const RunSpec& spec) {
  Stopwatch watch;
  const ArrayConfig array = array_from(spec);
  const NullSteerProblem prob = problem_from(spec);
  const bool isotropic = array.pattern.kind == RadiationPattern::Kind::Isotropic;
  const size_t k = prob.interferers.size();

  FeasibilityReport report;
  std::string route;
  if (k == 0) {
    // No interference: any boresight-aligned rotation reaches full gain.
    report.feasible = true;
    report.witness = isotropic
                         ? ArrayRotation{}
                         : ArrayRotation{0.0, 0.0, kPi / 2 - prob.desired.theta};
    report.achieved_gain = zf_gain(array, *report.witness, prob);
    route = "unconstrained";
  } else if (isotropic && k == 1) {
    report = isotropic_single_feasibility(array, prob.desired, prob.interferers[0]);
    route = "isotropic_single";
  } else if (isotropic) {
    report = isotropic_multi_solve(array, prob.desired, prob.interferers);
    route = "isotropic_multi";
  } else if (k == 1) {
    report = directional_single_solve(array, prob.desired, prob.interferers[0]);
    route = "directional_single";
  } else {
    report = directional_multi_intersect(array, prob.desired, prob.interferers);
    route = "directional_multi";
  }

  RunOutput output;
  output.record = base_record(spec);
  output.record["results"] = report_to_json(report);
  output.record["results"]["analysis"] = route;
  output.record["results"]["full_gain"] = array.full_gain();
  output.record["timing_ms"] = watch.elapsed_ms();

  if (parse_emit(spec.emit).json_out)
    write_file(fs::path(spec.out) / "analyze.json", output.record.dump(2) + "\n", output.files);
  return output;
}

RunOutput run_optimize(const RunSpec& spec) {
  Stopwatch watch;
  const ArrayConfig array = array_from(spec);
  const NullSteerProblem prob = problem_from(spec);
  const OptimizerConfig cfg = optimizer_from(spec);

  const OptimizerResult result = optimize(array, prob, cfg);
  const Real foa_gain = zf_gain(array, ArrayRotation{}, prob);

  const EmitSet emit = parse_emit(spec.emit);
  RunOutput output;
  output.record = base_record(spec);

  json results;
  results["best_arv_deg"] = {rad_to_deg(result.best_arv.alpha), rad_to_deg(result.best_arv.beta),
                             rad_to_deg(result.best_arv.gamma)};
  results["best_gain"] = result.best_gain;
  results["foa_gain"] = foa_gain;
  results["evaluations"] = result.evaluations;
  results["full_gain"] = array.full_gain();
  output.record["results"] = results;
  output.record["timing_ms"] = watch.elapsed_ms();

  if (emit.csv) {
    std::string csv = "round,phase,gain\n";
    for (const TraceRecord& rec : result.trace) {
      csv += std::to_string(rec.round);
      csv += rec.phase == OptimizerPhase::SequentialUpdate ? ",SU," : ",GS,";
      csv += fmt(rec.gain) + "\n";
    }
    write_file(fs::path(spec.out) / "optimize_trace.csv", csv, output.files);
  }
  if (emit.json_out)
    write_file(fs::path(spec.out) / "optimize.json", output.record.dump(2) + "\n", output.files);
  return output;
}

RunOutput run_montecarlo(const RunSpec& spec) {
  Stopwatch watch;
  const ArrayConfig array = array_from(spec);
  const auto [k_lo, k_hi] = parse_k_range(spec.k_range);
  std::vector<int> k_values;
  for (int k = k_lo; k <= k_hi; ++k) k_values.push_back(k);

  const auto rows = monte_carlo(array, Direction::from_degrees(spec.theta0), k_values,
                                spec.trials, optimizer_from(spec), spec.seed, spec.threads);

  const EmitSet emit = parse_emit(spec.emit);
  RunOutput output;
  output.record = base_record(spec);

  json results = json::array();
  for (const MonteCarloRow& row : rows) {
    json r;
    r["K"] = row.k;
    r["mean_gain_raa"] = row.mean_gain_raa;
    r["mean_gain_foa"] = row.mean_gain_foa;
    r["std_raa"] = row.std_raa;
    r["std_foa"] = row.std_foa;
    r["trials"] = row.trials;
    results.push_back(r);
  }
  output.record["results"] = results;
  output.record["timing_ms"] = watch.elapsed_ms();

  if (emit.csv) {
    std::string csv = "K,mean_gain_raa,mean_gain_foa,std_raa,std_foa,trials\n";
    for (const MonteCarloRow& row : rows) {
      csv += std::to_string(row.k) + "," + fmt(row.mean_gain_raa) + "," +
             fmt(row.mean_gain_foa) + "," + fmt(row.std_raa) + "," + fmt(row.std_foa) + "," +
             std::to_string(row.trials) + "\n";
    }
    write_file(fs::path(spec.out) / "montecarlo.csv", csv, output.files);
  }

  if (emit.svg_out) {
    svg::ChartSpec chart;
    chart.title = "Mean gain vs interference count";
    chart.x_label = "number of interference directions K";
    chart.y_label = "mean beam gain (linear)";
    chart.x_min = k_lo;
    chart.x_max = std::max(k_hi, k_lo + 1);
    chart.y_min = 0.0;
    chart.y_max = std::ceil(array.full_gain() * 1.05);
    svg::Series raa{"rotated array", "#c02020", {}};
    svg::Series foa{"fixed orientation", "#2040c0", {}};
    for (const MonteCarloRow& row : rows) {
      raa.points.emplace_back(row.k, row.mean_gain_raa);
      foa.points.emplace_back(row.k, row.mean_gain_foa);
    }
    chart.series = {std::move(raa), std::move(foa)};
    write_file(fs::path(spec.out) / "montecarlo.svg", svg::render_line_chart(chart),
               output.files);
  }

  if (emit.json_out)
    write_file(fs::path(spec.out) / "montecarlo.json", output.record.dump(2) + "\n",
               output.files);
  return output;
}

RunOutput run(const RunSpec& spec) {
  if (spec.command == "pattern") return run_pattern(spec);
  if (spec.command == "analyze") return run_analyze(spec);
  if (spec.command == "optimize") return run_optimize(spec);
  if (spec.command == "montecarlo") return run_montecarlo(spec);
  throw std::invalid_argument("unknown command: " + spec.command);
}

}  // namespace raa::cli
