#include "reduxsim/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace reduxsim {

namespace {

// Profile laws are re-stated here on purpose: the oracle validates the
// sampler, so it must not evaluate currents through the sampler's own
// functions.
double oracle_rate(const CurrentProfile& profile, double t) {
  if (const auto* c = std::get_if<ConstantProfile>(&profile)) {
    return c->rate;
  }
  if (const auto* w = std::get_if<WindowProfile>(&profile)) {
    if (t < w->start || t >= w->stop) return 0.0;
    return w->rate;
  }
  const auto& g = std::get<GaussianPulseProfile>(profile);
  const double u = t - g.center;
  return g.peak * std::exp(-u * u / (2.0 * g.width * g.width));
}

struct OracleEdge {
  int from = -1;
  int to = -1;
  const CurrentProfile* profile = nullptr;
};

// ODE state layout: [w_0..w_{n-1}, Lambda, P_0..P_{n-1}].
struct OracleSystem {
  const Superposition* state = nullptr;
  std::vector<OracleEdge> edges;
  size_t n = 0;

  void deriv(double t, const std::vector<double>& y, std::vector<double>& dy) const {
    dy.assign(y.size(), 0.0);
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) s += y[i];
    std::vector<double> net(n, 0.0);
    for (const auto& edge : edges) {
      const double rate = y[edge.from] > 0.0 ? oracle_rate(*edge.profile, t) : 0.0;
      dy[edge.from] -= rate;
      dy[edge.to] += rate;
      net[edge.to] += rate;
      net[edge.from] -= rate;
    }
    const double survival = std::exp(-y[n]);
    double total_hazard = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double inflow = net[i] > 0.0 ? net[i] : 0.0;
      const double hz = s > 0.0 ? inflow / s : 0.0;
      total_hazard += hz;
      dy[n + 1 + i] = hz * survival;
    }
    dy[n] = total_hazard;
  }
};

void rk4_segment(const OracleSystem& sys, double t0, double t1, int steps,
                 std::vector<double>& y) {
  const double h = (t1 - t0) / steps;
  std::vector<double> k1, k2, k3, k4, tmp(y.size());
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * h;
    sys.deriv(t, y, k1);
    for (size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
    sys.deriv(t + 0.5 * h, tmp, k2);
    for (size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
    sys.deriv(t + 0.5 * h, tmp, k3);
    for (size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + h * k3[j];
    sys.deriv(t + h, tmp, k4);
    for (size_t j = 0; j < y.size(); ++j) {
      y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
  }
}

std::vector<double> integrate(const OracleSystem& sys, const std::vector<double>& breakpoints,
                              const std::vector<double>& y0, int steps_per_unit) {
  std::vector<double> y = y0;
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double len = breakpoints[i + 1] - breakpoints[i];
    if (len <= 0.0) continue;
    const int steps = std::max(16, static_cast<int>(std::ceil(len * steps_per_unit)));
    rk4_segment(sys, breakpoints[i], breakpoints[i + 1], steps, y);
  }
  return y;
}

}  // namespace

OracleResult selection_probability_oracle(const Superposition& initial,
                                          const CurrentModel& model, double horizon) {
  if (!(horizon > 0.0)) {
    throw std::invalid_argument("selection_probability_oracle: horizon must be positive");
  }

  OracleSystem sys;
  sys.state = &initial;
  sys.n = initial.components.size();
  for (const auto& edge : initial.edges) {
    if (!edge.active) continue;
    const auto key = make_transition_key(initial.components[edge.from].detector_pattern(),
                                         initial.components[edge.to].detector_pattern());
    const auto it = model.profiles.find(key);
    if (it == model.profiles.end()) continue;
    sys.edges.push_back({edge.from, edge.to, &it->second});
  }

  // Split the horizon at window discontinuities so every RK4 segment is smooth.
  std::vector<double> breakpoints{0.0, horizon};
  for (const auto& edge : sys.edges) {
    if (const auto* w = std::get_if<WindowProfile>(edge.profile)) {
      for (double b : {w->start, w->stop}) {
        if (b > 0.0 && b < horizon) breakpoints.push_back(b);
      }
    }
  }
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

  std::vector<double> y0(2 * sys.n + 1, 0.0);
  for (size_t i = 0; i < sys.n; ++i) y0[i] = initial.components[i].weight;

  // Refine until the hit probabilities are stable well below the 1e-6 bound.
  std::vector<double> coarse = integrate(sys, breakpoints, y0, 256);
  std::vector<double> fine;
  for (int steps_per_unit = 512; steps_per_unit <= (1 << 20); steps_per_unit *= 2) {
    fine = integrate(sys, breakpoints, y0, steps_per_unit);
    double delta = std::abs(std::exp(-fine[sys.n]) - std::exp(-coarse[sys.n]));
    for (size_t i = 0; i < sys.n; ++i) {
      delta = std::max(delta, std::abs(fine[sys.n + 1 + i] - coarse[sys.n + 1 + i]));
    }
    coarse = fine;
    if (delta < 1e-9) break;
  }

  OracleResult result;
  result.survival = std::exp(-coarse[sys.n]);
  for (const auto& edge : sys.edges) {
    const auto pattern = initial.components[edge.to].detector_pattern();
    result.selection_probability[pattern] = coarse[sys.n + 1 + edge.to];
  }
  return result;
}

std::uint64_t derive_run_seed(std::uint64_t base_seed, std::uint64_t run_index) {
  std::uint64_t z = base_seed + (run_index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

struct RunSummary {
  bool no_hit = true;
  std::string first_pattern;
  double first_time = 0.0;
  int stochastic_hits = 0;
  RunDiagnostics diagnostics;
};

}  // namespace

EnsembleStats run_ensemble(const RunSetup& setup, long long n_runs, std::uint64_t base_seed,
                           const RunObserver& observer, int threads) {
  if (n_runs < 1) {
    throw std::invalid_argument("run_ensemble: n_runs must be >= 1");
  }

  int n_threads = threads;
  if (n_threads <= 0) {
    n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
  }
  n_threads = static_cast<int>(std::min<long long>(n_threads, n_runs));

  // Per-run results land in preassigned slots and are folded sequentially,
  // so the aggregate is identical for any thread count.
  std::vector<RunSummary> results(static_cast<size_t>(n_runs));
  std::atomic<long long> next{0};
  std::mutex observer_mutex;
  std::mutex error_mutex;
  std::exception_ptr first_error;

  const auto worker = [&]() {
    try {
      for (;;) {
        const long long idx = next.fetch_add(1, std::memory_order_relaxed);
        if (idx >= n_runs) break;
        const std::uint64_t seed = derive_run_seed(base_seed, static_cast<std::uint64_t>(idx));
        Rng rng(seed);
        RunLog log = run_scenario(setup, rng);
        log.seed = seed;

        RunSummary summary;
        summary.stochastic_hits = log.stochastic_hit_count();
        summary.diagnostics = log.diagnostics;
        if (const HitRecord* first = log.first_stochastic_hit()) {
          summary.no_hit = false;
          summary.first_pattern = first->chosen_pattern;
          summary.first_time = first->time;
        }
        results[static_cast<size_t>(idx)] = std::move(summary);

        if (observer) {
          std::lock_guard<std::mutex> lock(observer_mutex);
          observer(log);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      next.store(n_runs, std::memory_order_relaxed);
    }
  };

  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  EnsembleStats stats;
  stats.n_runs = n_runs;
  std::map<std::string, double> time_sums;
  for (const auto& summary : results) {
    ++stats.hit_count_histogram[summary.stochastic_hits];
    if (summary.no_hit) {
      ++stats.no_hit_count;
    } else {
      ++stats.choice_counts[summary.first_pattern];
      time_sums[summary.first_pattern] += summary.first_time;
    }
    auto& worst = stats.worst;
    const auto& d = summary.diagnostics;
    worst.max_step_modulus_drift = std::max(worst.max_step_modulus_drift, d.max_step_modulus_drift);
    worst.max_total_modulus_drift =
        std::max(worst.max_total_modulus_drift, d.max_total_modulus_drift);
    worst.max_pre_hit_dual_weight = std::max(worst.max_pre_hit_dual_weight, d.max_pre_hit_dual_weight);
    worst.dual_component_before_first_hit |= d.dual_component_before_first_hit;
  }
  for (const auto& [pattern, count] : stats.choice_counts) {
    const double f = static_cast<double>(count) / static_cast<double>(n_runs);
    stats.frequencies[pattern] = f;
    stats.sigma[pattern] = std::sqrt(f * (1.0 - f) / static_cast<double>(n_runs));
    stats.mean_first_hit_time[pattern] = time_sums[pattern] / static_cast<double>(count);
  }
  return stats;
}

namespace {

// Infers which first-hit targets record a fresh capture on detector 0.
double oracle_a_capture_probability(const RunSetup& setup, const OracleResult& oracle) {
  const auto& state = setup.initial;
  double p = 0.0;
  for (const auto& [pattern, prob] : oracle.selection_probability) {
    const int idx = state.find_by_pattern(pattern);
    if (idx < 0) continue;
    bool fresh_a = false;
    for (const auto& edge : state.edges) {
      if (edge.to != idx || !edge.active) continue;
      if (state.components[idx].detectors[0].level == DetectorLevel::Capture &&
          state.components[edge.from].detectors[0].level == DetectorLevel::Ground) {
        fresh_a = true;
      }
    }
    if (fresh_a) p += prob;
  }
  return p;
}

std::string single_run_outcome(const RunSetup& setup, std::uint64_t seed) {
  Rng rng(seed);
  const RunLog log = run_scenario(setup, rng);
  for (const auto& hit : log.hits) {
    if (hit.prepared) continue;
    for (const auto& cap : hit.captures) {
      if (cap.detector == 0) {
        return "detector 0 captured at t=" + std::to_string(hit.time);
      }
    }
  }
  return "no stochastic capture on detector 0";
}

CausalityArmResult run_causality_arm(const RunSetup& setup, long long n_runs,
                                     std::uint64_t arm_seed) {
  std::atomic<long long> a_count{0};
  const RunObserver observer = [&a_count](const RunLog& log) {
    for (const auto& hit : log.hits) {
      if (hit.prepared) continue;
      for (const auto& cap : hit.captures) {
        if (cap.detector == 0) {
          a_count.fetch_add(1, std::memory_order_relaxed);
          return;
        }
      }
    }
  };

  CausalityArmResult arm;
  arm.stats = run_ensemble(setup, n_runs, arm_seed, observer);
  arm.a_capture_count = a_count.load();
  arm.a_capture_frequency =
      static_cast<double>(arm.a_capture_count) / static_cast<double>(n_runs);

  const OracleResult oracle =
      selection_probability_oracle(setup.initial, setup.model, setup.t_end);
  arm.oracle_prediction = oracle_a_capture_probability(setup, oracle);
  arm.three_sigma = 3.0 * std::sqrt(arm.oracle_prediction * (1.0 - arm.oracle_prediction) /
                                    static_cast<double>(n_runs));
  return arm;
}

}  // namespace

CausalityReport causality_demo(const RunSetup& baseline, const RunSetup& with_b,
                               long long n_runs, std::uint64_t base_seed) {
  if (n_runs < 1) {
    throw std::invalid_argument("causality_demo: n_runs must be >= 1");
  }

  // Every prepared reduction must stay spacelike separated from detector 0's
  // whole observed worldline segment, otherwise the comparison would probe
  // an ordinary timelike influence.
  for (const RunSetup* setup : {&baseline, &with_b}) {
    const double xa = setup->initial.detector_positions[0];
    for (const auto& hit : setup->prepared_hits) {
      for (const auto& cap : hit.captures) {
        for (double t : {0.0, setup->t_end}) {
          if (interval(cap.event, {t, xa}).kind != IntervalKind::Spacelike) {
            throw std::invalid_argument(
                "causality_demo: prepared reduction is not spacelike separated from "
                "detector 0's worldline over the run window");
          }
        }
      }
    }
  }

  CausalityReport report;
  const std::uint64_t baseline_seed = derive_run_seed(base_seed, 0x626173656c696e65ULL);
  const std::uint64_t with_b_seed = derive_run_seed(base_seed, 0x776974685f625f72ULL);
  report.baseline = run_causality_arm(baseline, n_runs, baseline_seed);
  report.with_b_reduction = run_causality_arm(with_b, n_runs, with_b_seed);

  report.difference =
      std::abs(report.baseline.a_capture_frequency - report.with_b_reduction.a_capture_frequency);
  // Pooled binomial radius; degenerates gracefully at n = 1 where a single
  // draw carries no evidence.
  const double pooled =
      static_cast<double>(report.baseline.a_capture_count + report.with_b_reduction.a_capture_count) /
      static_cast<double>(2 * n_runs);
  report.difference_three_sigma =
      3.0 * std::sqrt(2.0 * pooled * (1.0 - pooled) / static_cast<double>(n_runs));
  report.significant =
      report.difference_three_sigma > 0.0 && report.difference > report.difference_three_sigma;

  report.single_run_conclusive = false;
  report.single_run_note =
      "a single run yields one outcome draw governed by one probability law; the arm "
      "cannot be identified from it, only ensemble frequencies separate the arms";
  report.baseline_single_outcome =
      single_run_outcome(baseline, derive_run_seed(baseline_seed, 0));
  report.with_b_single_outcome =
      single_run_outcome(with_b, derive_run_seed(with_b_seed, 0));
  return report;
}

}  // namespace reduxsim
