#include "runner.hpp"

#include "raa/beamform.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace {

std::vector<raa::Real> parse_number_list(const std::string& text, const char* what) {
  std::vector<raa::Real> out;
  if (text.empty()) return out;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(what) + ": cannot parse '" + token + "'");
    }
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

/// Flat key=value config file mirroring the CLI flags. Returned as a flag
/// token stream; command-line flags parsed later take precedence.
std::vector<std::string> config_file_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key=value: " + entry);
    const std::string key = trim(entry.substr(0, eq));
    const std::string value = trim(entry.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line has empty key: " + entry);
    if (key == "config") throw std::invalid_argument("config files cannot nest");
    tokens.push_back("--" + key);
    tokens.push_back(value);
  }
  return tokens;
}

void add_common_options(CLI::App* sub, raa::cli::RunSpec& spec, std::string& interferers,
                        std::string& arv, std::string& config_path) {
  auto opt = [&](const std::string& name, auto& target, const char* help) {
    sub->add_option(name, target, help)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  };
  opt("--config", config_path, "flat key=value file mirroring these flags");
  opt("--n", spec.n, "number of array elements");
  opt("--spacing", spec.spacing, "element spacing in wavelengths");
  opt("--pattern", spec.pattern, "element pattern: iso or cos");
  opt("--p", spec.p, "cosine pattern directivity exponent");
  opt("--theta0", spec.theta0, "desired direction in degrees");
  opt("--interferers", interferers, "comma-separated interference directions in degrees");
  opt("--arv", arv, "rotation angles alpha,beta,gamma in degrees");
  opt("--step", spec.step, "pattern sweep step in degrees");
  opt("--q", spec.q, "grid points per angular dimension");
  opt("--rounds", spec.rounds, "sequential-update rounds");
  opt("--gs-iters", spec.gs_iters, "Gibbs iterations per round");
  opt("--candidates", spec.candidates, "candidates per Gibbs iteration");
  opt("--max-shift", spec.max_shift, "adjacent shift radius in grid steps");
  opt("--mu", spec.mu, "Gibbs temperature");
  opt("--seed", spec.seed, "random seed");
  opt("--trials", spec.trials, "Monte-Carlo trials per K");
  opt("--k-range", spec.k_range, "interference counts lo:hi");
  opt("--out", spec.out, "output directory");
  opt("--emit", spec.emit, "outputs to write: csv,json,svg");
  opt("--threads", spec.threads, "worker threads (0 = hardware)");
}

/// Splices config-file tokens right after the subcommand name so that
/// explicit command-line flags override file values.
std::vector<std::string> effective_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  if (config_path.empty()) return args;
  for (size_t i = 0; i < args.size(); ++i) {
    if (!args[i].empty() && args[i][0] != '-') {  // subcommand token
      const std::vector<std::string> extra = config_file_tokens(config_path);
      args.insert(args.begin() + i + 1, extra.begin(), extra.end());
      break;
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotatable-array null steering: beam patterns, closed-form feasibility, "
               "rotation optimization and Monte-Carlo sweeps"};
  app.set_version_flag("--version", raa::cli::kToolVersion);
  app.require_subcommand(1);

  raa::cli::RunSpec spec;
  std::string interferers = "-10,30,60,115";
  std::string arv = "0,0,0";
  std::string config_path;

  CLI::App* pattern = app.add_subcommand("pattern", "sweep the beam pattern for a rotation");
  CLI::App* analyze = app.add_subcommand("analyze", "closed-form feasibility analysis");
  CLI::App* optimize = app.add_subcommand("optimize", "optimize the rotation angles");
  CLI::App* montecarlo = app.add_subcommand("montecarlo", "mean gain versus interference count");
  for (CLI::App* sub : {pattern, analyze, optimize, montecarlo})
    add_common_options(sub, spec, interferers, arv, config_path);

  try {
    std::vector<std::string> args = effective_args(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  if (pattern->parsed()) spec.command = "pattern";
  if (analyze->parsed()) spec.command = "analyze";
  if (optimize->parsed()) spec.command = "optimize";
  if (montecarlo->parsed()) spec.command = "montecarlo";

  try {
    spec.interferers = parse_number_list(interferers, "interferers");
    spec.arv = parse_number_list(arv, "arv");
    const raa::cli::RunOutput output = raa::cli::run(spec);
    for (const std::string& file : output.files) std::printf("wrote %s\n", file.c_str());
    if (output.record.contains("results") && output.record["results"].contains("best_gain")) {
      std::printf("best gain %.6f (baseline %.6f)\n",
                  output.record["results"]["best_gain"].get<double>(),
                  output.record["results"]["foa_gain"].get<double>());
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const raa::BeamformError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
