#include <benchmark/benchmark.h>

#include "reduxsim/dynamics.hpp"
#include "reduxsim/ensemble.hpp"
#include "reduxsim/minkowski.hpp"
#include "reduxsim/state.hpp"

namespace {

using namespace reduxsim;

CurrentModel sequential_model() {
  CurrentModel model;
  model.profiles[make_transition_key("00", "10")] = WindowProfile{0.45, 0.0, 1.0};
  model.profiles[make_transition_key("00", "01")] = WindowProfile{0.45, 0.0, 1.0};
  model.profiles[make_transition_key("10", "11")] = WindowProfile{0.3, 0.0, 3.0};
  model.profiles[make_transition_key("01", "11")] = WindowProfile{0.3, 0.0, 3.0};
  return model;
}

Superposition observed_state() {
  Superposition state = build_observed_template();
  state.detector_positions = {-5.0, 5.0};
  return state;
}

void BM_hazard(benchmark::State& bench) {
  const Superposition state = observed_state();
  const CurrentModel model = sequential_model();
  for (auto _ : bench) {
    benchmark::DoNotOptimize(hazard(state, model, 0.5));
  }
}
BENCHMARK(BM_hazard);

void BM_step(benchmark::State& bench) {
  const Superposition initial = observed_state();
  const CurrentModel model = sequential_model();
  for (auto _ : bench) {
    Superposition state = initial;
    step(state, model, 0.001953125);
    benchmark::DoNotOptimize(state.components.front().weight);
  }
}
BENCHMARK(BM_step);

void BM_run_scenario(benchmark::State& bench) {
  RunSetup setup;
  setup.initial = observed_state();
  setup.model = sequential_model();
  setup.t_end = 3.0;
  setup.dt = 0.001953125;
  setup.trajectory_stride = 0;
  std::uint64_t seed = 0;
  for (auto _ : bench) {
    Rng rng(derive_run_seed(42, seed++));
    const RunLog log = run_scenario(setup, rng);
    benchmark::DoNotOptimize(log.final_state.components.size());
  }
}
BENCHMARK(BM_run_scenario);

void BM_selection_oracle(benchmark::State& bench) {
  const Superposition state = observed_state();
  const CurrentModel model = sequential_model();
  for (auto _ : bench) {
    benchmark::DoNotOptimize(selection_probability_oracle(state, model, 1.0));
  }
}
BENCHMARK(BM_selection_oracle);

void BM_boost(benchmark::State& bench) {
  const SpacetimeEvent ev{1.25, -3.5};
  const LorentzFrame frame{0.6};
  for (auto _ : bench) {
    benchmark::DoNotOptimize(boost(ev, frame));
  }
}
BENCHMARK(BM_boost);

void BM_classify_hk(benchmark::State& bench) {
  const SpacetimeEvent ev{0.4, 2.0};
  const SpacetimeEvent hit_a{1.0, -5.0};
  const SpacetimeEvent hit_b{1.3, 5.0};
  for (auto _ : bench) {
    benchmark::DoNotOptimize(classify_hk(ev, hit_a, hit_b));
  }
}
BENCHMARK(BM_classify_hk);

void BM_region_map(benchmark::State& bench) {
  const SpacetimeEvent hit_a{1.0, -5.0};
  const SpacetimeEvent hit_b{1.3, 5.0};
  const GridSpec grid{-1.0, 4.0, -8.0, 8.0, 100, 100};
  for (auto _ : bench) {
    benchmark::DoNotOptimize(
        region_map(BoundaryStrategy::HellwigKraus, hit_a, hit_b, LorentzFrame{0.0}, grid));
  }
}
BENCHMARK(BM_region_map);

}  // namespace

BENCHMARK_MAIN();
