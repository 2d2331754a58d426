#pragma once

#include "raa/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace raa::cli {

inline constexpr const char* kToolVersion = "raa-nullsteer 0.1.0";

/// Fully resolved invocation of one subcommand. Angles are carried in
/// degrees here and converted to radians exactly once when the domain
/// objects are built.
struct RunSpec {
  std::string command = "pattern";  // pattern | analyze | optimize | montecarlo

  int n = 8;
  Real spacing = 0.5;
  std::string pattern = "iso";  // iso | cos
  Real p = 0.5;

  Real theta0 = 45.0;
  std::vector<Real> interferers = {-10.0, 30.0, 60.0, 115.0};

  std::vector<Real> arv = {0.0, 0.0, 0.0};  // pattern command: rotation in degrees
  Real step = 0.25;                         // pattern sweep step in degrees

  int q = 360;
  int rounds = 5;
  int gs_iters = 50;
  int candidates = 36;
  int max_shift = 3;
  Real mu = 1.0;
  std::uint64_t seed = 1;

  int trials = 100;
  std::string k_range = "1:7";

  std::string out = ".";
  std::string emit = "csv,json,svg";
  int threads = 0;
};

/// Files written by a run plus the JSON result record (also written to disk
/// when "json" is in the emit list).
struct RunOutput {
  nlohmann::json record;
  std::vector<std::string> files;
};

RunOutput run_pattern(const RunSpec& spec);
RunOutput run_analyze(const RunSpec& spec);
RunOutput run_optimize(const RunSpec& spec);
RunOutput run_montecarlo(const RunSpec& spec);

/// Dispatch on spec.command.
RunOutput run(const RunSpec& spec);

/// Key=value lines mirroring the CLI flags; parsing them as a config file
/// reproduces the run exactly.
std::string config_echo_text(const RunSpec& spec);

}  // namespace raa::cli
