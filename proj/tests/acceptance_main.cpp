// Acceptance gate: ten numbered end-to-end checks over the bundled scenario
// files. Each criterion prints exactly one PASS/FAIL line; the process exits
// nonzero if any selected criterion fails. With no arguments all ten run;
// otherwise each argument names one criterion by number.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "reduxsim/dynamics.hpp"
#include "reduxsim/ensemble.hpp"
#include "reduxsim/minkowski.hpp"
#include "reduxsim/scenario.hpp"
#include "reduxsim/state.hpp"

namespace {

using namespace reduxsim;

struct Check {
  bool ok = false;
  std::string detail;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ScenarioConfig load_config(const std::string& name) {
  const std::string path = std::string(REDUXSIM_SCENARIO_DIR) + "/" + name;
  return parse_scenario_config(slurp(path), name);
}

RunSetup load_setup(const std::string& name, const ScenarioConfig& config) {
  RunSetup setup = build_run_setup(config);
  setup.trajectory_stride = 0;
  return setup;
}

std::string fmt(double value, int precision = 6) {
  std::ostringstream out;
  out.precision(precision);
  out << value;
  return out.str();
}

std::vector<LorentzFrame> tenth_step_frames() {
  std::vector<LorentzFrame> frames;
  for (int i = -9; i <= 9; ++i) frames.push_back({i / 10.0});
  return frames;
}

// 1: with currents on every admissible edge, the both-captured component must
// carry exactly zero weight in every step before the first stochastic hit.
Check criterion_1() {
  const ScenarioConfig config = load_config("observed_sequential.json");
  for (const char* key : {"00->10", "00->01", "10->11", "01->11"}) {
    if (!config.profiles.count(key)) return {false, std::string("missing profile ") + key};
  }
  const long long n = 100000;
  const EnsembleStats stats = run_ensemble(load_setup("observed_sequential.json", config), n,
                                           config.seed);
  const bool ok = stats.worst.max_pre_hit_dual_weight == 0.0 &&
                  !stats.worst.dual_component_before_first_hit;
  return {ok, "both-captured weight before the first hit stayed exactly 0 across " +
                  std::to_string(n) + " runs (worst " +
                  fmt(stats.worst.max_pre_hit_dual_weight) + ")"};
}

// 2: every two-hit observed run ends in the single fully-captured conscious
// component, and that component was created by the first reduction.
Check criterion_2() {
  const ScenarioConfig config = load_config("observed_sequential.json");
  const RunSetup setup = load_setup("observed_sequential.json", config);
  long long two_hit = 0;
  long long violations = 0;
  const auto observer = [&](const RunLog& log) {
    if (log.stochastic_hit_count() != 2) return;
    ++two_hit;
    bool good = log.hits.size() == 2 && log.hits[1].time > log.hits[0].time &&
                log.hits[1].chosen_pattern == "11" &&
                log.final_state.components.size() == 1;
    if (good) {
      const Component& survivor = log.final_state.components.front();
      good = survivor.label() == "D1B1D1B1" && survivor.born_at == log.hits[0].time;
    }
    if (!good) ++violations;
  };
  run_ensemble(setup, 20000, config.seed, observer);
  const bool ok = two_hit > 0 && violations == 0;
  return {ok, std::to_string(two_hit) + " two-hit runs, " + std::to_string(violations) +
                  " structural violations (final component D1B1D1B1 born at hit 1)"};
}

// 3: empirical selection frequencies and survival match the quadrature oracle
// within three binomial sigma at n = 1e5 for five current shapes; the
// symmetric case also matches its closed form (1 - 1/e) / 2.
Check criterion_3() {
  const long long n = 100000;
  double worst_z = 0.0;
  std::string worst_at = "none";
  const auto track = [&](double f, double p, const std::string& where) {
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    const double z = sigma > 0.0 ? std::abs(f - p) / sigma : (f == p ? 0.0 : 1e9);
    if (z > worst_z) {
      worst_z = z;
      worst_at = where;
    }
  };
  for (const char* name : {"oracle_symmetric.json", "oracle_ratio_2to1.json",
                           "oracle_gaussian.json", "oracle_window.json", "oracle_mixed.json"}) {
    const ScenarioConfig config = load_config(name);
    const RunSetup setup = load_setup(name, config);
    const OracleResult oracle =
        selection_probability_oracle(setup.initial, setup.model, setup.t_end);
    const EnsembleStats stats = run_ensemble(setup, n, config.seed);
    for (const auto& [pattern, count] : stats.choice_counts) {
      if (!oracle.selection_probability.count(pattern)) {
        return {false, std::string(name) + ": sampled pattern " + pattern +
                           " carries zero oracle probability"};
      }
      (void)count;
    }
    for (const auto& [pattern, p] : oracle.selection_probability) {
      const auto it = stats.frequencies.find(pattern);
      const double f = it == stats.frequencies.end() ? 0.0 : it->second;
      track(f, p, std::string(name) + " " + pattern);
    }
    const double f_survive =
        static_cast<double>(stats.no_hit_count) / static_cast<double>(n);
    track(f_survive, oracle.survival, std::string(name) + " survival");
    if (std::string(name) == "oracle_symmetric.json") {
      const double closed_form = (1.0 - std::exp(-1.0)) / 2.0;
      track(stats.frequencies.at("10"), closed_form, "closed form 10");
      track(stats.frequencies.at("01"), closed_form, "closed form 01");
    }
  }
  const bool ok = worst_z <= 3.0;
  return {ok, "five current shapes at n = " + std::to_string(n) + ", worst deviation " +
                  fmt(worst_z, 3) + " sigma (" + worst_at + "), limit 3"};
}

// 4: square-modulus conservation, per step and cumulative, across mixed
// workloads.
Check criterion_4() {
  struct Item {
    const char* name;
    long long runs;
  };
  double worst_step = 0.0;
  double worst_total = 0.0;
  for (const Item& item : {Item{"observed_sequential.json", 20000},
                           Item{"objective_dual.json", 20000}, Item{"oracle_mixed.json", 10000}}) {
    const ScenarioConfig config = load_config(item.name);
    const EnsembleStats stats =
        run_ensemble(load_setup(item.name, config), item.runs, config.seed);
    worst_step = std::max(worst_step, stats.worst.max_step_modulus_drift);
    worst_total = std::max(worst_total, stats.worst.max_total_modulus_drift);
  }
  const bool ok = worst_step <= 1e-9 && worst_total <= 1e-6;
  return {ok, "worst per-step drift " + fmt(worst_step, 3) + " (limit 1e-9), worst run drift " +
                  fmt(worst_total, 3) + " (limit 1e-6) over 50000 runs"};
}

// 5: light-cone region labels are unchanged when the event and both hits are
// boosted into a common frame.
Check criterion_5() {
  Rng rng(20260822u);
  const auto coord = [&] { return -5.0 + 10.0 * rng.uniform01(); };
  int mismatches = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    const SpacetimeEvent ev{coord(), coord()};
    const SpacetimeEvent a{coord(), coord()};
    const SpacetimeEvent b{coord(), coord()};
    const LorentzFrame frame{-0.99 + 1.98 * rng.uniform01()};
    const RegionLabel home = classify_hk(ev, a, b);
    const RegionLabel moved = classify_hk(boost(ev, frame), boost(a, frame), boost(b, frame));
    if (home != moved) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " label mismatches in " +
                               std::to_string(trials) + " random boosted triples"};
}

// 6: constant-time-surface labels are frame-dependent: an event on the first
// detector's worldline just before its capture reads PreBoth at rest yet
// PostBOnly in some scanned frame.
Check criterion_6() {
  const SpacetimeEvent probe{0.95, 0.0};
  const SpacetimeEvent hit_a{1.0, 0.0};
  const SpacetimeEvent hit_b{1.2, 10.0};
  if (interval(hit_a, hit_b).kind != IntervalKind::Spacelike) {
    return {false, "constructed hits are not spacelike separated"};
  }
  if (classify_aa(probe, hit_a, hit_b, LorentzFrame{0.0}) != RegionLabel::PreBoth) {
    return {false, "probe event is not PreBoth in the rest frame"};
  }
  for (int i = 0; i < 39; ++i) {
    const double v = -0.95 + 0.05 * i;
    if (classify_aa(probe, hit_a, hit_b, LorentzFrame{v}) == RegionLabel::PostBOnly) {
      return {true, "probe flips PreBoth (v = 0) to PostBOnly at v = " + fmt(v, 3)};
    }
  }
  return {false, "no frame in the 39-velocity scan relabels the probe PostBOnly"};
}

// 7: boundary counts are frame-invariant for sequential observed captures and
// non-invariant (1 at rest, 2 boosted) for a simultaneous dual capture.
Check criterion_7() {
  const std::vector<LorentzFrame> frames = tenth_step_frames();

  const ScenarioConfig seq_config = load_config("observed_sequential.json");
  const RunSetup seq_setup = load_setup("observed_sequential.json", seq_config);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 400 && checked < 25; ++seed) {
    Rng rng(derive_run_seed(seq_config.seed, seed));
    const RunLog log = run_scenario(seq_setup, rng);
    if (log.stochastic_hit_count() != 2) continue;
    ++checked;
    const InvarianceReport report = invariance_report(log, frames);
    if (!report.invariant || report.home_count != 2 || report.anomaly) {
      return {false, "sequential log " + std::to_string(seed) + " is not frame-invariant"};
    }
  }
  if (checked < 25) return {false, "only " + std::to_string(checked) + " two-hit logs found"};

  const ScenarioConfig dual_config = load_config("objective_dual.json");
  const RunSetup dual_setup = load_setup("objective_dual.json", dual_config);
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    Rng rng(derive_run_seed(dual_config.seed, seed));
    const RunLog log = run_scenario(dual_setup, rng);
    const bool dual = std::any_of(log.hits.begin(), log.hits.end(),
                                  [](const HitRecord& h) { return h.dual; });
    if (!dual) continue;
    const InvarianceReport report = invariance_report(log, frames);
    bool counts_ok = report.home_count == 1;
    for (const FrameBoundaryCount& pf : report.per_frame) {
      counts_ok = counts_ok && pf.boundary_count == (pf.velocity == 0.0 ? 1 : 2);
    }
    const bool ok =
        counts_ok && !report.invariant && report.anomaly && report.dual_hit_present;
    return {ok, std::to_string(checked) +
                    " sequential logs invariant at 2 boundaries; dual capture counts 1 at rest, "
                    "2 boosted, flagged " +
                    (report.anomaly ? "anomalous" : "NOT anomalous")};
  }
  return {false, "no simultaneous dual capture found in 2000 seeded runs"};
}

// 8: the backward light cone evaluated at its own apex returns the hit time
// bit for bit.
Check criterion_8() {
  Rng rng(8u);
  int bad = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    const SpacetimeEvent hit{-50.0 + 100.0 * rng.uniform01(), -50.0 + 100.0 * rng.uniform01()};
    if (hk_boundary_time(hit, hit.x) != hit.t) ++bad;
  }
  return {bad == 0, std::to_string(bad) + " apex identities broken in " +
                        std::to_string(trials) + " random hits"};
}

// 9: the fractional square-modulus change between two logged events on a
// detector worldline is a frame scalar, and their proper time survives
// boosting within 1e-12.
Check criterion_9() {
  ScenarioConfig config = load_config("observed_sequential.json");
  RunSetup setup = build_run_setup(config);
  setup.trajectory_stride = 1;
  Rng rng(config.seed);
  const RunLog log = run_scenario(setup, rng);
  if (log.hits.empty() || log.trajectory.size() < 8) {
    return {false, "reference run lacks hits or trajectory samples"};
  }
  const double first_hit = log.hits.front().time;
  std::vector<std::size_t> pre;
  for (std::size_t i = 0; i < log.trajectory.size(); ++i) {
    if (log.trajectory[i].t < first_hit) pre.push_back(i);
  }
  if (pre.size() < 3) return {false, "not enough samples before the first hit"};
  const std::size_t k1 = pre[pre.size() / 3];
  const std::size_t k2 = pre[(2 * pre.size()) / 3];
  const double s1 = log.trajectory[k1].weights.at(0);
  const double s2 = log.trajectory[k2].weights.at(0);
  if (!(s1 > 0.0) || k1 == k2) return {false, "degenerate sample pair"};

  const double x_det = setup.initial.detector_positions[0];
  const SpacetimeEvent e1{log.trajectory[k1].t, x_det};
  const SpacetimeEvent e2{log.trajectory[k2].t, x_det};
  // The sampled weights ride with the worldline events; a boost relabels
  // coordinates only, so the fractional change must come out bit-identical.
  const double home_ratio = (s2 - s1) / s1;
  const IntervalResult home_iv = interval(e1, e2);
  if (home_iv.kind != IntervalKind::Timelike || !home_iv.proper_time) {
    return {false, "sample pair is not timelike"};
  }
  const double home_tau = *home_iv.proper_time;

  Rng vrng(9u);
  int ratio_bad = 0;
  int tau_bad = 0;
  int kind_bad = 0;
  double worst_tau = 0.0;
  const int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    const LorentzFrame frame{-0.99 + 1.98 * vrng.uniform01()};
    const SpacetimeEvent b1 = boost(e1, frame);
    const SpacetimeEvent b2 = boost(e2, frame);
    const double boosted_ratio = (s2 - s1) / s1;
    if (boosted_ratio != home_ratio) ++ratio_bad;
    const IntervalResult iv = interval(b1, b2);
    if (iv.kind != IntervalKind::Timelike || !iv.proper_time) {
      ++kind_bad;
      continue;
    }
    worst_tau = std::max(worst_tau, std::abs(*iv.proper_time - home_tau));
    if (std::abs(*iv.proper_time - home_tau) > 1e-12) ++tau_bad;
  }
  const bool ok = ratio_bad == 0 && tau_bad == 0 && kind_bad == 0;
  return {ok, "fractional change bit-stable over " + std::to_string(trials) +
                  " boosts, worst proper-time shift " + fmt(worst_tau, 3) + " (limit 1e-12)"};
}

// 10: a remote reduction halves the local inflow, the two ensemble arms
// separate by more than three pooled sigma and each matches its own oracle,
// yet no single run distinguishes the arms.
Check criterion_10() {
  const std::string path = std::string(REDUXSIM_SCENARIO_DIR) + "/causality_demo.json";
  const CausalityConfig config = parse_causality_config(slurp(path), "causality_demo.json");
  RunSetup baseline = build_run_setup(config.baseline);
  RunSetup with_b = build_run_setup(config.with_b_reduction);
  baseline.trajectory_stride = 0;
  with_b.trajectory_stride = 0;
  const CausalityReport report = causality_demo(baseline, with_b, config.n_runs, config.seed);

  const auto arm_ok = [](const CausalityArmResult& arm) {
    return std::abs(arm.a_capture_frequency - arm.oracle_prediction) <= arm.three_sigma;
  };
  const bool ok = arm_ok(report.baseline) && arm_ok(report.with_b_reduction) &&
                  report.significant && report.difference > report.difference_three_sigma &&
                  !report.single_run_conclusive && !report.single_run_note.empty();
  return {ok, "arm frequencies " + fmt(report.baseline.a_capture_frequency, 4) + " vs " +
                  fmt(report.with_b_reduction.a_capture_frequency, 4) + ", difference " +
                  fmt(report.difference, 4) + " > " + fmt(report.difference_three_sigma, 4) +
                  ", single run inconclusive"};
}

using CriterionFn = Check (*)();

constexpr CriterionFn kCriteria[] = {criterion_1, criterion_2, criterion_3, criterion_4,
                                     criterion_5, criterion_6, criterion_7, criterion_8,
                                     criterion_9, criterion_10};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    int number = 0;
    try {
      number = std::stoi(argv[i]);
    } catch (const std::exception&) {
      number = 0;
    }
    if (number < 1 || number > 10) {
      std::cerr << "usage: acceptance [criterion numbers 1..10]\n";
      return 2;
    }
    selected.push_back(number);
  }
  if (selected.empty()) {
    for (int i = 1; i <= 10; ++i) selected.push_back(i);
  }

  int failures = 0;
  for (int number : selected) {
    Check check;
    try {
      check = kCriteria[number - 1]();
    } catch (const std::exception& e) {
      check = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (check.ok ? "PASS" : "FAIL") << " criterion " << number << ": " << check.detail
              << std::endl;
    if (!check.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
