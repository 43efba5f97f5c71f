#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "reduxsim/dynamics.hpp"

namespace reduxsim {

struct OracleResult {
  // First-hit selection probability over the horizon, keyed by the chosen
  // component's detector pattern.
  std::map<std::string, double> selection_probability;
  // Probability that no hit occurs before the horizon.
  double survival = 1.0;
};

// Analytic first-hit law, computed independently of the sampler: integrates
// P_n = int h_n(t) exp(-int_0^t h_total) dt with a high-order scheme on a
// breakpoint-split grid refined until the result is stable to < 1e-6.
// Requires piecewise-smooth profiles.
OracleResult selection_probability_oracle(const Superposition& initial,
                                          const CurrentModel& model, double horizon);

struct EnsembleStats {
  long long n_runs = 0;
  // First stochastic hit per run, keyed by chosen detector pattern.
  std::map<std::string, long long> choice_counts;
  long long no_hit_count = 0;
  std::map<std::string, double> frequencies;
  // One-sigma binomial radius per frequency; checks use three sigma.
  std::map<std::string, double> sigma;
  std::map<std::string, double> mean_first_hit_time;
  std::map<int, long long> hit_count_histogram;
  // Worst-case per-run diagnostics across the ensemble.
  RunDiagnostics worst;
};

// Decorrelates per-run seeds from one base seed (splitmix64 mixing).
std::uint64_t derive_run_seed(std::uint64_t base_seed, std::uint64_t run_index);

using RunObserver = std::function<void(const RunLog&)>;

// n_runs independent seeded runs, aggregated deterministically: results are
// identical for a given base_seed regardless of thread count. The observer,
// when given, sees every run's log (serialized by a lock, any order).
// threads = 0 picks a hardware-based default.
EnsembleStats run_ensemble(const RunSetup& setup, long long n_runs, std::uint64_t base_seed,
                           const RunObserver& observer = {}, int threads = 0);

struct CausalityArmResult {
  EnsembleStats stats;
  long long a_capture_count = 0;
  double a_capture_frequency = 0.0;
  double oracle_prediction = 0.0;
  double three_sigma = 0.0;
};

struct CausalityReport {
  CausalityArmResult baseline;
  CausalityArmResult with_b_reduction;
  double difference = 0.0;
  double difference_three_sigma = 0.0;
  // True when the ensembles separate by more than three sigma.
  bool significant = false;
  // A single run never distinguishes the arms; filled from run 0 of each.
  bool single_run_conclusive = false;
  std::string single_run_note;
  std::string baseline_single_outcome;
  std::string with_b_single_outcome;
};

// Ensemble comparison of the first-detector capture frequency with and
// without a prior spacelike second-detector reduction. Throws
// std::invalid_argument when the prepared reduction is not spacelike
// separated from the first detector's capture window.
CausalityReport causality_demo(const RunSetup& baseline, const RunSetup& with_b,
                               long long n_runs, std::uint64_t base_seed);

}  // namespace reduxsim
