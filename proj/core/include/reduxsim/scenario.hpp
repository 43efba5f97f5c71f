#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reduxsim/ensemble.hpp"

namespace reduxsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario configuration as read from a JSON file. Parsing validates every
// invariant (positive dt and t_end, frame speeds below 1, nonnegative
// profiles, well-formed transition keys) and throws ConfigError with the
// offending location.
struct ScenarioConfig {
  MeasurementMode mode = MeasurementMode::Objective;
  bool allow_direct_fourth = false;
  std::array<double, 2> detector_positions{-1.0, 1.0};
  double t_end = 1.0;
  double dt = 0.01;
  bool has_seed = false;
  std::uint64_t seed = 0;
  BoundaryStrategy strategy = BoundaryStrategy::HellwigKraus;
  std::vector<double> frames;
  std::map<std::string, CurrentProfile> profiles;

  struct PreparedHit {
    double time = 0.0;
    std::string pattern;
  };
  std::vector<PreparedHit> prepared_hits;

  // Explicit hit list for region maps (first entry is hit A, second hit B).
  std::vector<SpacetimeEvent> region_hits;

  bool has_grid = false;
  GridSpec grid;

  int trajectory_stride = 1;
  long long n_runs = 100000;
};

// Two-arm configuration for the ensemble causality comparison.
struct CausalityConfig {
  ScenarioConfig baseline;
  ScenarioConfig with_b_reduction;
  long long n_runs = 100000;
  bool has_seed = false;
  std::uint64_t seed = 0;
};

ScenarioConfig parse_scenario_config(const std::string& text,
                                     const std::string& source_name = "config");

// True when the JSON document has the two-arm "arms" layout.
bool is_causality_config(const std::string& text);

CausalityConfig parse_causality_config(const std::string& text,
                                       const std::string& source_name = "config");

// Builds the initial state (template plus prepared reductions), current
// model, and run parameters for a validated config.
RunSetup build_run_setup(const ScenarioConfig& config);

std::string to_string(MeasurementMode mode);
MeasurementMode measurement_mode_from_string(const std::string& s);
BoundaryStrategy boundary_strategy_from_string(const std::string& s);

std::string serialize_run_log(const RunLog& log);
std::string serialize_ensemble_stats(const EnsembleStats& stats,
                                     const OracleResult* oracle = nullptr);
std::string serialize_invariance_report(const InvarianceReport& report);
std::string serialize_causality_report(const CausalityReport& report, long long n_runs);

// Analysis-relevant subset of a serialized run log.
struct ParsedRunLog {
  std::uint64_t seed = 0;
  std::string mode;
  std::string strategy;
  std::vector<HitRecord> hits;
  std::vector<TrajectorySample> trajectory;
  std::vector<std::string> final_labels;
  std::vector<double> final_weights;
};

ParsedRunLog parse_run_log(const std::string& text,
                           const std::string& source_name = "run log");

}  // namespace reduxsim
