#include "reduxsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace reduxsim {

double profile_rate(const CurrentProfile& profile, double t) {
  if (const auto* c = std::get_if<ConstantProfile>(&profile)) {
    return c->rate;
  }
  if (const auto* w = std::get_if<WindowProfile>(&profile)) {
    return (t >= w->start && t < w->stop) ? w->rate : 0.0;
  }
  const auto& g = std::get<GaussianPulseProfile>(profile);
  const double z = (t - g.center) / g.width;
  return g.peak * std::exp(-0.5 * z * z);
}

bool profile_has_future_current(const CurrentProfile& profile, double t) {
  if (const auto* c = std::get_if<ConstantProfile>(&profile)) {
    return c->rate > 0.0;
  }
  if (const auto* w = std::get_if<WindowProfile>(&profile)) {
    return w->rate > 0.0 && t < w->stop;
  }
  // A Gaussian tail never vanishes exactly, so a pulse-fed component is
  // never starved by the clock alone.
  return std::get<GaussianPulseProfile>(profile).peak > 0.0;
}

std::string make_transition_key(const std::string& from_pattern, const std::string& to_pattern) {
  return from_pattern + "->" + to_pattern;
}

namespace {

// Per-edge view resolved against the model once per structure change; the
// hot loop then avoids string keys entirely. Edges with no configured
// profile never carry current and are dropped here.
struct EdgeSlot {
  int edge_index = -1;
  int from = -1;
  int to = -1;
  const CurrentProfile* profile = nullptr;
};

// Reused scratch buffers; components and edges stay in the single digits, so
// the point is avoiding churn, not size.
struct Workspace {
  std::vector<EdgeSlot> slots;
  std::vector<double> currents;
  std::vector<double> net;
  std::vector<double> per_component;
  std::vector<double> out_want;
  std::vector<double> scale;
  std::vector<double> taken;
  std::vector<char> can_gain;
  std::vector<char> has_in;
  std::vector<char> out_open;
};

void build_edge_slots(const Superposition& state, const CurrentModel& model, Workspace& ws) {
  ws.slots.clear();
  for (size_t i = 0; i < state.edges.size(); ++i) {
    const auto& edge = state.edges[i];
    const std::string key =
        make_transition_key(state.components[edge.from].detector_pattern(),
                            state.components[edge.to].detector_pattern());
    const auto it = model.profiles.find(key);
    if (it == model.profiles.end()) continue;
    ws.slots.push_back({static_cast<int>(i), edge.from, edge.to, &it->second});
  }
}

void eval_currents(const Superposition& state, Workspace& ws, double t) {
  ws.currents.resize(ws.slots.size());
  for (size_t i = 0; i < ws.slots.size(); ++i) {
    const EdgeSlot& slot = ws.slots[i];
    const auto& edge = state.edges[slot.edge_index];
    const auto& src = state.components[slot.from];
    double current = 0.0;
    if (edge.active && !src.phantom && !state.components[slot.to].phantom &&
        src.weight > 0.0) {
      current = profile_rate(*slot.profile, t);
    }
    ws.currents[i] = current;
  }
}

// Fills ws.per_component with the positive net inflow over the total
// modulus, phantoms pinned at zero; returns the total.
double hazard_into(const Superposition& state, Workspace& ws) {
  const double s = total_modulus(state);
  if (!(s > 0.0)) {
    throw std::domain_error("hazard: total modulus must be positive");
  }
  const size_t n = state.components.size();
  ws.net.assign(n, 0.0);
  for (size_t i = 0; i < ws.slots.size(); ++i) {
    ws.net[ws.slots[i].to] += ws.currents[i];
    ws.net[ws.slots[i].from] -= ws.currents[i];
  }
  ws.per_component.assign(n, 0.0);
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (state.components[i].phantom) continue;
    if (ws.net[i] > 0.0) {
      ws.per_component[i] = ws.net[i] / s;
      total += ws.per_component[i];
    }
  }
  return total;
}

// Explicit Euler transfers from start-of-step weights. A source that cannot
// cover its total outflow scales every outgoing transfer proportionally and
// lands on zero.
void apply_transfers(Superposition& state, Workspace& ws, double dt) {
  const size_t n = state.components.size();
  ws.out_want.assign(n, 0.0);
  for (size_t i = 0; i < ws.slots.size(); ++i) {
    ws.out_want[ws.slots[i].from] += ws.currents[i] * dt;
  }
  ws.scale.assign(n, 1.0);
  for (size_t c = 0; c < n; ++c) {
    const double w = state.components[c].weight;
    if (ws.out_want[c] > w) {
      ws.scale[c] = ws.out_want[c] > 0.0 ? w / ws.out_want[c] : 0.0;
    }
  }
  ws.taken.assign(n, 0.0);
  for (size_t i = 0; i < ws.slots.size(); ++i) {
    const double amount = ws.currents[i] * dt * ws.scale[ws.slots[i].from];
    if (amount <= 0.0) continue;
    state.components[ws.slots[i].to].weight += amount;
    ws.taken[ws.slots[i].from] += amount;
  }
  for (size_t c = 0; c < n; ++c) {
    if (ws.taken[c] == 0.0) continue;
    double w = state.components[c].weight - ws.taken[c];
    if (w < 0.0) w = 0.0;  // at most one ulp of rounding from the scaled path
    state.components[c].weight = w;
  }
}

void check_step_guard(double total_hazard, double dt) {
  if (total_hazard * dt >= 0.1) {
    throw StepSizeError("step: total hazard " + std::to_string(total_hazard) + " * dt " +
                        std::to_string(dt) + " >= 0.1; reduce dt");
  }
}

int pick_component(const Workspace& ws, double total, double u) {
  double pick = u * total;
  int chosen = -1;
  for (size_t i = 0; i < ws.per_component.size(); ++i) {
    if (ws.per_component[i] <= 0.0) continue;
    chosen = static_cast<int>(i);
    pick -= ws.per_component[i];
    if (pick < 0.0) break;
  }
  return chosen;
}

std::vector<std::string> component_labels(const Superposition& state) {
  std::vector<std::string> labels;
  labels.reserve(state.components.size());
  for (const auto& c : state.components) labels.push_back(c.label());
  return labels;
}

// A component goes phantom once nothing can ever flow again: no in-edge can
// deliver current (upstream supply exhausted or profiles over) and it has no
// weight left to push out itself. The root (no in-edges) is the supply and
// never becomes a phantom.
void detect_phantoms(Superposition& state, Workspace& ws, double t, RunLog& log) {
  const size_t n = state.components.size();
  ws.can_gain.assign(n, 0);
  for (size_t pass = 0; pass < n; ++pass) {
    bool changed = false;
    for (const auto& slot : ws.slots) {
      if (ws.can_gain[slot.to]) continue;
      if (!state.edges[slot.edge_index].active) continue;
      const auto& src = state.components[slot.from];
      if (src.phantom) continue;
      if (!profile_has_future_current(*slot.profile, t)) continue;
      if (src.weight > 0.0 || ws.can_gain[slot.from]) {
        ws.can_gain[slot.to] = 1;
        changed = true;
      }
    }
    if (!changed) break;
  }

  ws.has_in.assign(n, 0);
  ws.out_open.assign(n, 0);
  for (const auto& edge : state.edges) {
    ws.has_in[edge.to] = 1;
  }
  for (const auto& slot : ws.slots) {
    if (state.edges[slot.edge_index].active &&
        profile_has_future_current(*slot.profile, t)) {
      ws.out_open[slot.from] = 1;
    }
  }

  for (size_t i = 0; i < n; ++i) {
    const auto& c = state.components[i];
    if (c.phantom || !ws.has_in[i] || ws.can_gain[i]) continue;
    if (c.weight > 0.0 && ws.out_open[i]) continue;
    const std::string label = c.label();
    mark_phantom(state, static_cast<int>(i));
    log.phantoms.push_back({t, static_cast<int>(i), label});
  }
}

void track_pre_hit_dual(const Superposition& state, RunDiagnostics& diag) {
  for (const auto& c : state.components) {
    if (!c.all_captured() || c.weight <= 0.0) continue;
    diag.dual_component_before_first_hit = true;
    if (c.weight > diag.max_pre_hit_dual_weight) diag.max_pre_hit_dual_weight = c.weight;
  }
}

}  // namespace

double CurrentModel::edge_current(const Superposition& state, const TransitionEdge& edge,
                                  double t) const {
  if (!edge.active) return 0.0;
  const auto& src = state.components.at(edge.from);
  const auto& dst = state.components.at(edge.to);
  if (src.phantom || dst.phantom) return 0.0;
  if (src.weight <= 0.0) return 0.0;
  const auto it =
      profiles.find(make_transition_key(src.detector_pattern(), dst.detector_pattern()));
  if (it == profiles.end()) return 0.0;
  return profile_rate(it->second, t);
}

Hazard hazard(const Superposition& state, const CurrentModel& model, double t) {
  Workspace ws;
  build_edge_slots(state, model, ws);
  eval_currents(state, ws, t);
  Hazard h;
  h.total = hazard_into(state, ws);
  h.per_component = ws.per_component;
  return h;
}

void step(Superposition& state, const CurrentModel& model, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("step: dt must be positive");
  }
  Workspace ws;
  build_edge_slots(state, model, ws);
  eval_currents(state, ws, state.time);
  check_step_guard(hazard_into(state, ws), dt);
  apply_transfers(state, ws, dt);
  state.time += dt;
}

std::optional<SampledHit> sample_hit(const Superposition& state, const CurrentModel& model,
                                     double dt, Rng& rng) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("sample_hit: dt must be positive");
  }
  Workspace ws;
  build_edge_slots(state, model, ws);
  eval_currents(state, ws, state.time);
  const double total = hazard_into(state, ws);
  check_step_guard(total, dt);

  const double u = rng.uniform01();
  if (u >= total * dt) return std::nullopt;
  const int chosen = pick_component(ws, total, rng.uniform01());
  const double offset = rng.uniform01() * dt;
  return SampledHit{chosen, state.time + offset};
}

int RunLog::stochastic_hit_count() const {
  int count = 0;
  for (const auto& hit : hits) {
    if (!hit.prepared) ++count;
  }
  return count;
}

const HitRecord* RunLog::first_stochastic_hit() const {
  for (const auto& hit : hits) {
    if (!hit.prepared) return &hit;
  }
  return nullptr;
}

RunLog run_scenario(const Superposition& initial, const CurrentModel& model,
                    MeasurementMode mode, BoundaryStrategy strategy, double t_end, double dt,
                    Rng& rng, int trajectory_stride, const std::vector<HitRecord>& prepared_hits) {
  if (mode != initial.mode) {
    throw std::invalid_argument("run_scenario: mode does not match the state's mode");
  }
  if (!(dt > 0.0) || !(t_end > 0.0)) {
    throw std::invalid_argument("run_scenario: dt and t_end must be positive");
  }

  RunLog log;
  log.strategy = strategy;
  log.hits = prepared_hits;

  Superposition state = initial;
  state.time = 0.0;
  const double initial_total = total_modulus(state);

  log.epochs.push_back({0.0, component_labels(state)});

  Workspace ws;
  build_edge_slots(state, model, ws);

  const auto record_sample = [&]() {
    TrajectorySample sample;
    sample.t = state.time;
    sample.weights.reserve(state.components.size());
    for (const auto& c : state.components) sample.weights.push_back(c.weight);
    log.trajectory.push_back(std::move(sample));
  };
  if (trajectory_stride > 0) record_sample();

  bool had_stochastic_hit = false;
  track_pre_hit_dual(state, log.diagnostics);
  detect_phantoms(state, ws, 0.0, log);

  long long step_index = 0;
  while (state.time < t_end - 1e-12) {
    const double t0 = state.time;
    const double h = std::min(dt, t_end - t0);

    eval_currents(state, ws, t0);
    const double total_hazard = hazard_into(state, ws);
    check_step_guard(total_hazard, dt);

    const double total_before = total_modulus(state);

    const double u = rng.uniform01();
    if (u < total_hazard * h) {
      const int chosen = pick_component(ws, total_hazard, rng.uniform01());
      const double hit_t = t0 + rng.uniform01() * h;

      apply_transfers(state, ws, hit_t - t0);
      state.time = hit_t;

      if (!had_stochastic_hit) track_pre_hit_dual(state, log.diagnostics);

      // The capture events of this reduction: detectors recorded in the
      // chosen component but not in the source feeding it. With several
      // feeding edges the dominant current decides the route.
      int source = chosen;
      double best_current = 0.0;
      for (size_t i = 0; i < ws.slots.size(); ++i) {
        if (ws.slots[i].to == chosen && ws.currents[i] > best_current) {
          best_current = ws.currents[i];
          source = ws.slots[i].from;
        }
      }
      HitRecord record;
      record.time = hit_t;
      record.chosen_index = chosen;
      record.chosen_pattern = state.components[chosen].detector_pattern();
      for (size_t d = 0; d < state.components[chosen].detectors.size(); ++d) {
        if (state.components[chosen].detectors[d].level == DetectorLevel::Capture &&
            state.components[source].detectors[d].level == DetectorLevel::Ground) {
          record.captures.push_back(
              {static_cast<int>(d), {hit_t, state.detector_positions[d]}});
        }
      }
      record.dual = record.captures.size() >= 2;

      SpacetimeEvent hit_event{hit_t, state.detector_positions[0]};
      if (!record.captures.empty()) {
        hit_event = record.captures.front().event;
      }
      apply_reduction(state, {chosen, hit_event, strategy});
      record.chosen_label = state.components[0].label();
      log.hits.push_back(std::move(record));
      had_stochastic_hit = true;

      log.epochs.push_back({hit_t, component_labels(state)});
      build_edge_slots(state, model, ws);

      const double rem = t0 + h - hit_t;
      if (rem > 0.0) {
        eval_currents(state, ws, hit_t);
        check_step_guard(hazard_into(state, ws), dt);
        apply_transfers(state, ws, rem);
      }
      state.time = t0 + h;
    } else {
      apply_transfers(state, ws, h);
      state.time = t0 + h;
    }

    const double total_after = total_modulus(state);
    const double step_drift = std::abs(total_after - total_before);
    if (step_drift > log.diagnostics.max_step_modulus_drift) {
      log.diagnostics.max_step_modulus_drift = step_drift;
    }
    const double run_drift = std::abs(total_after - initial_total);
    if (run_drift > log.diagnostics.max_total_modulus_drift) {
      log.diagnostics.max_total_modulus_drift = run_drift;
    }

    if (!had_stochastic_hit) track_pre_hit_dual(state, log.diagnostics);
    detect_phantoms(state, ws, state.time, log);

    ++step_index;
    if (trajectory_stride > 0 && step_index % trajectory_stride == 0) record_sample();
  }

  log.final_state = std::move(state);
  return log;
}

RunLog run_scenario(const RunSetup& setup, Rng& rng) {
  return run_scenario(setup.initial, setup.model, setup.initial.mode, setup.strategy,
                      setup.t_end, setup.dt, rng, setup.trajectory_stride, setup.prepared_hits);
}

InvarianceReport invariance_report_from_hits(const std::vector<HitRecord>& hits,
                                             const std::vector<LorentzFrame>& frames) {
  std::vector<std::vector<SpacetimeEvent>> groups;
  groups.reserve(hits.size());
  bool dual_present = false;
  for (const auto& hit : hits) {
    if (hit.dual) dual_present = true;
    std::vector<SpacetimeEvent> captures;
    for (const auto& cap : hit.captures) captures.push_back(cap.event);
    if (captures.empty()) captures.push_back({hit.time, 0.0});
    groups.push_back(std::move(captures));
  }
  InvarianceReport report = count_boundaries(groups, frames);
  report.dual_hit_present = dual_present;
  return report;
}

InvarianceReport invariance_report(const RunLog& log, const std::vector<LorentzFrame>& frames) {
  return invariance_report_from_hits(log.hits, frames);
}

}  // namespace reduxsim
