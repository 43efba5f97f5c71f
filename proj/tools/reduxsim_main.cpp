#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reduxsim/scenario.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw reduxsim::ConfigError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw reduxsim::ConfigError("cannot open " + out_path + " for writing");
  out << content;
  if (!out) throw reduxsim::ConfigError("write to " + out_path + " failed");
}

std::optional<std::uint64_t> env_seed() {
  const char* env = std::getenv("REDUXSIM_SEED");
  if (!env || !*env) return std::nullopt;
  const std::string text(env);
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw reduxsim::ConfigError("REDUXSIM_SEED: expected a nonnegative integer, got \"" + text +
                                  "\"");
    }
  }
  errno = 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(text.c_str(), &end, 10);
  if (errno != 0 || end == text.c_str() || *end != '\0') {
    throw reduxsim::ConfigError("REDUXSIM_SEED: expected a nonnegative integer, got \"" + text +
                                "\"");
  }
  return static_cast<std::uint64_t>(value);
}

// Seed precedence: --seed flag, then the config, then REDUXSIM_SEED, then 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, bool config_has_seed,
                           std::uint64_t config_seed) {
  if (flag) return *flag;
  if (config_has_seed) return config_seed;
  if (const auto env = env_seed()) return *env;
  return 0;
}

reduxsim::GridSpec parse_grid_flag(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  if (parts.size() != 6) {
    throw reduxsim::ConfigError("--grid: expected t0,t1,x0,x1,nt,nx");
  }
  reduxsim::GridSpec grid;
  try {
    size_t used = 0;
    grid.t0 = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    grid.t1 = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    grid.x0 = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
    grid.x1 = std::stod(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument(parts[3]);
    grid.nt = std::stoi(parts[4], &used);
    if (used != parts[4].size()) throw std::invalid_argument(parts[4]);
    grid.nx = std::stoi(parts[5], &used);
    if (used != parts[5].size()) throw std::invalid_argument(parts[5]);
  } catch (const std::exception&) {
    throw reduxsim::ConfigError("--grid: expected t0,t1,x0,x1,nt,nx");
  }
  if (grid.nt < 1 || grid.nx < 1) {
    throw reduxsim::ConfigError("--grid: nt and nx must be >= 1");
  }
  return grid;
}

std::vector<reduxsim::LorentzFrame> to_frames(const std::vector<double>& velocities) {
  std::vector<reduxsim::LorentzFrame> frames;
  frames.reserve(velocities.size());
  for (double v : velocities) {
    if (!(std::abs(v) < 1.0)) {
      throw reduxsim::ConfigError("--frame: speeds must satisfy |v| < 1");
    }
    frames.push_back({v});
  }
  return frames;
}

bool looks_like_run_log(const std::string& text) {
  return text.find("\"reduxsim_run_log_v1\"") != std::string::npos;
}

// First capture event per detector across the log's reductions.
void hits_from_records(const std::vector<reduxsim::HitRecord>& hits,
                       std::optional<reduxsim::SpacetimeEvent>& hit_a,
                       std::optional<reduxsim::SpacetimeEvent>& hit_b) {
  for (const auto& hit : hits) {
    for (const auto& cap : hit.captures) {
      if (cap.detector == 0 && !hit_a) hit_a = cap.event;
      if (cap.detector == 1 && !hit_b) hit_b = cap.event;
    }
  }
}

std::string frame_suffixed_path(const std::string& path, double velocity) {
  char suffix[32];
  std::snprintf(suffix, sizeof(suffix), "_v%+.3f", velocity);
  const size_t slash = path.find_last_of('/');
  const size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + suffix;
  }
  return path.substr(0, dot) + suffix + path.substr(dot);
}

struct CommandArgs {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<reduxsim::GridSpec> grid;
  std::vector<double> frame_velocities;
  std::optional<long long> runs;
};

int cmd_simulate(const CommandArgs& args) {
  const std::string text = read_file(args.config_path);
  if (reduxsim::is_causality_config(text)) {
    throw reduxsim::ConfigError(args.config_path +
                                ": two-arm configs run under the ensemble command");
  }
  const auto config = reduxsim::parse_scenario_config(text, args.config_path);
  auto setup = reduxsim::build_run_setup(config);
  const std::uint64_t seed = resolve_seed(args.seed, config.has_seed, config.seed);

  reduxsim::Rng rng(seed);
  reduxsim::RunLog log = reduxsim::run_scenario(setup, rng);
  log.seed = seed;
  write_output(args.out_path, reduxsim::serialize_run_log(log));
  return 0;
}

int cmd_regionmap(const CommandArgs& args) {
  const std::string text = read_file(args.config_path);

  reduxsim::BoundaryStrategy strategy = reduxsim::BoundaryStrategy::HellwigKraus;
  std::optional<reduxsim::SpacetimeEvent> hit_a;
  std::optional<reduxsim::SpacetimeEvent> hit_b;
  std::optional<reduxsim::GridSpec> grid = args.grid;
  std::vector<double> velocities = args.frame_velocities;

  if (looks_like_run_log(text)) {
    const auto log = reduxsim::parse_run_log(text, args.config_path);
    strategy = reduxsim::boundary_strategy_from_string(log.strategy);
    hits_from_records(log.hits, hit_a, hit_b);
  } else {
    const auto config = reduxsim::parse_scenario_config(text, args.config_path);
    strategy = config.strategy;
    if (!grid && config.has_grid) grid = config.grid;
    if (velocities.empty()) velocities = config.frames;
    if (!config.region_hits.empty()) {
      hit_a = config.region_hits[0];
      if (config.region_hits.size() > 1) hit_b = config.region_hits[1];
    } else {
      auto setup = reduxsim::build_run_setup(config);
      const std::uint64_t seed = resolve_seed(args.seed, config.has_seed, config.seed);
      reduxsim::Rng rng(seed);
      const reduxsim::RunLog log = reduxsim::run_scenario(setup, rng);
      hits_from_records(log.hits, hit_a, hit_b);
    }
  }

  if (!grid) {
    throw reduxsim::ConfigError(
        "regionmap: no grid given; pass --grid t0,t1,x0,x1,nt,nx or a \"grid\" config object");
  }
  if (!hit_a && !hit_b) {
    throw reduxsim::ConfigError(
        "regionmap: no hits; supply a \"hits\" list, a run log, or a scenario that produces "
        "captures");
  }

  // HK boundaries are frame-independent; only AA maps vary per frame.
  if (strategy == reduxsim::BoundaryStrategy::HellwigKraus || velocities.empty()) {
    const double v = velocities.empty() ? 0.0 : velocities.front();
    write_output(args.out_path,
                 reduxsim::region_map_csv(strategy, hit_a, hit_b, {v}, *grid));
    return 0;
  }

  const auto frames = to_frames(velocities);
  if (frames.size() == 1) {
    write_output(args.out_path,
                 reduxsim::region_map_csv(strategy, hit_a, hit_b, frames[0], *grid));
    return 0;
  }
  if (args.out_path.empty()) {
    throw reduxsim::ConfigError(
        "regionmap: several frames write several files; --out is required");
  }
  for (const auto& frame : frames) {
    write_output(frame_suffixed_path(args.out_path, frame.velocity),
                 reduxsim::region_map_csv(strategy, hit_a, hit_b, frame, *grid));
  }
  return 0;
}

int cmd_invariance(const CommandArgs& args) {
  const std::string text = read_file(args.config_path);
  std::vector<reduxsim::LorentzFrame> frames = to_frames(args.frame_velocities);

  reduxsim::InvarianceReport report;
  if (looks_like_run_log(text)) {
    const auto log = reduxsim::parse_run_log(text, args.config_path);
    report = reduxsim::invariance_report_from_hits(log.hits, frames);
  } else {
    const auto config = reduxsim::parse_scenario_config(text, args.config_path);
    if (frames.empty()) frames = to_frames(config.frames);
    auto setup = reduxsim::build_run_setup(config);
    const std::uint64_t seed = resolve_seed(args.seed, config.has_seed, config.seed);
    reduxsim::Rng rng(seed);
    const reduxsim::RunLog log = reduxsim::run_scenario(setup, rng);
    report = reduxsim::invariance_report(log, frames);
  }
  write_output(args.out_path, reduxsim::serialize_invariance_report(report));
  return 0;
}

int cmd_ensemble(const CommandArgs& args) {
  const std::string text = read_file(args.config_path);

  if (reduxsim::is_causality_config(text)) {
    const auto config = reduxsim::parse_causality_config(text, args.config_path);
    const long long n_runs = args.runs ? *args.runs : config.n_runs;
    if (n_runs < 1) throw reduxsim::ConfigError("--runs: must be >= 1");
    const std::uint64_t seed = resolve_seed(args.seed, config.has_seed, config.seed);

    auto baseline = reduxsim::build_run_setup(config.baseline);
    auto with_b = reduxsim::build_run_setup(config.with_b_reduction);
    baseline.trajectory_stride = 0;
    with_b.trajectory_stride = 0;
    const auto report = reduxsim::causality_demo(baseline, with_b, n_runs, seed);
    write_output(args.out_path, reduxsim::serialize_causality_report(report, n_runs));
    return 0;
  }

  const auto config = reduxsim::parse_scenario_config(text, args.config_path);
  const long long n_runs = args.runs ? *args.runs : config.n_runs;
  if (n_runs < 1) throw reduxsim::ConfigError("--runs: must be >= 1");
  const std::uint64_t seed = resolve_seed(args.seed, config.has_seed, config.seed);

  auto setup = reduxsim::build_run_setup(config);
  setup.trajectory_stride = 0;
  const auto stats = reduxsim::run_ensemble(setup, n_runs, seed);
  const auto oracle =
      reduxsim::selection_probability_oracle(setup.initial, setup.model, setup.t_end);
  write_output(args.out_path, reduxsim::serialize_ensemble_stats(stats, &oracle));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rule-based stochastic state reduction: simulation, region maps, invariance checks"};
  app.require_subcommand(1);

  CommandArgs args;
  std::uint64_t seed_value = 0;
  std::string grid_text;
  long long runs_value = 0;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", args.config_path, "scenario or report input (JSON)")
        ->required();
    cmd->add_option("--out", args.out_path, "output file (stdout when absent)");
    return cmd->add_option("--seed", seed_value, "random seed override");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run one seeded scenario, write the run log");
  CLI::Option* sim_seed = add_common(simulate);

  CLI::App* regionmap =
      app.add_subcommand("regionmap", "sample reduction-region labels over a spacetime grid");
  CLI::Option* map_seed = add_common(regionmap);
  regionmap->add_option("--grid", grid_text, "t0,t1,x0,x1,nt,nx");
  regionmap->add_option("--frame", args.frame_velocities, "frame velocity (repeatable)");

  CLI::App* invariance =
      app.add_subcommand("invariance", "count reduction boundaries across frames");
  CLI::Option* inv_seed = add_common(invariance);
  invariance->add_option("--frame", args.frame_velocities, "frame velocity (repeatable)");

  CLI::App* ensemble =
      app.add_subcommand("ensemble", "frequency statistics over many seeded runs");
  CLI::Option* ens_seed = add_common(ensemble);
  CLI::Option* runs_opt = ensemble->add_option("--runs", runs_value, "number of runs");

  try {
    app.parse(argc, argv);

    if (simulate->parsed() && sim_seed->count() > 0) args.seed = seed_value;
    if (regionmap->parsed() && map_seed->count() > 0) args.seed = seed_value;
    if (invariance->parsed() && inv_seed->count() > 0) args.seed = seed_value;
    if (ensemble->parsed() && ens_seed->count() > 0) args.seed = seed_value;
    if (!grid_text.empty()) args.grid = parse_grid_flag(grid_text);
    if (runs_opt->count() > 0) args.runs = runs_value;

    if (simulate->parsed()) return cmd_simulate(args);
    if (regionmap->parsed()) return cmd_regionmap(args);
    if (invariance->parsed()) return cmd_invariance(args);
    return cmd_ensemble(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const reduxsim::StepSizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
