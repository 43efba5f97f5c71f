#include "reduxsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace reduxsim {

namespace {

using nlohmann::json;

json parse_document(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    const auto bracket = msg.find("] ");
    if (bracket != std::string::npos) msg = msg.substr(bracket + 2);
    throw ConfigError(source + ": " + msg);
  }
}

// Best-effort line anchor for a semantic error: walks the key names in order
// through the raw text and reports the line of the innermost one found.
int line_of_keys(const std::string& text, const std::vector<std::string>& keys) {
  size_t pos = 0;
  bool found = false;
  for (const auto& key : keys) {
    const std::string needle = "\"" + key + "\"";
    const size_t at = text.find(needle, pos);
    if (at == std::string::npos) break;
    pos = at + needle.size();
    found = true;
  }
  if (!found) return 1;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

struct ParseContext {
  const std::string& text;
  const std::string& source;

  [[noreturn]] void fail(const std::vector<std::string>& keys, const std::string& message) const {
    std::string path;
    for (const auto& key : keys) {
      if (!path.empty()) path += '.';
      path += key;
    }
    if (path.empty()) path = "top level";
    throw ConfigError(source + ":" + std::to_string(line_of_keys(text, keys)) + ": " + path +
                      ": " + message);
  }
};

std::vector<std::string> extend(std::vector<std::string> keys, const std::string& key) {
  keys.push_back(key);
  return keys;
}

void check_keys(const ParseContext& ctx, const json& obj, const std::vector<std::string>& keys,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* name : allowed) {
      if (item.key() == name) {
        known = true;
        break;
      }
    }
    if (!known) ctx.fail(extend(keys, item.key()), "unknown field");
  }
}

double as_number(const ParseContext& ctx, const json& j, const std::vector<std::string>& keys) {
  if (!j.is_number()) ctx.fail(keys, "expected a number");
  return j.get<double>();
}

bool as_bool(const ParseContext& ctx, const json& j, const std::vector<std::string>& keys) {
  if (!j.is_boolean()) ctx.fail(keys, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const ParseContext& ctx, const json& j, const std::vector<std::string>& keys) {
  if (!j.is_string()) ctx.fail(keys, "expected a string");
  return j.get<std::string>();
}

long long as_integer(const ParseContext& ctx, const json& j, const std::vector<std::string>& keys) {
  if (!j.is_number_integer()) ctx.fail(keys, "expected an integer");
  return j.get<long long>();
}

std::uint64_t as_seed(const ParseContext& ctx, const json& j, const std::vector<std::string>& keys) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0) {
    return static_cast<std::uint64_t>(j.get<long long>());
  }
  ctx.fail(keys, "expected a nonnegative integer");
}

bool valid_pattern(const std::string& pattern) {
  if (pattern.size() != 2) return false;
  for (char c : pattern) {
    if (c != '0' && c != '1') return false;
  }
  return true;
}

void validate_transition_key(const ParseContext& ctx, const std::string& key,
                             const std::vector<std::string>& keys) {
  const bool shaped = key.size() == 6 && key[2] == '-' && key[3] == '>' &&
                      valid_pattern(key.substr(0, 2)) && valid_pattern(key.substr(4, 2));
  if (!shaped) ctx.fail(keys, "transition keys look like \"00->10\"");
  const std::string from = key.substr(0, 2);
  const std::string to = key.substr(4, 2);
  if (from == to) ctx.fail(keys, "transition must change the detector pattern");
  for (size_t i = 0; i < 2; ++i) {
    if (from[i] == '1' && to[i] == '0') {
      ctx.fail(keys, "captures are irreversible, no 1 -> 0 transition");
    }
  }
}

CurrentProfile parse_profile(const ParseContext& ctx, const json& j,
                             const std::vector<std::string>& keys) {
  if (!j.is_object()) ctx.fail(keys, "expected an object");
  if (!j.contains("type")) ctx.fail(keys, "missing \"type\"");
  const std::string type = as_string(ctx, j.at("type"), extend(keys, "type"));

  const auto number_field = [&](const char* name) {
    if (!j.contains(name)) ctx.fail(keys, std::string("missing \"") + name + "\"");
    return as_number(ctx, j.at(name), extend(keys, name));
  };

  if (type == "constant") {
    check_keys(ctx, j, keys, {"type", "rate"});
    ConstantProfile p;
    p.rate = number_field("rate");
    if (p.rate < 0.0) ctx.fail(extend(keys, "rate"), "must be >= 0");
    return p;
  }
  if (type == "window") {
    check_keys(ctx, j, keys, {"type", "rate", "start", "stop"});
    WindowProfile p;
    p.rate = number_field("rate");
    p.start = number_field("start");
    p.stop = number_field("stop");
    if (p.rate < 0.0) ctx.fail(extend(keys, "rate"), "must be >= 0");
    if (p.stop < p.start) ctx.fail(extend(keys, "stop"), "must be >= start");
    return p;
  }
  if (type == "gaussian_pulse") {
    check_keys(ctx, j, keys, {"type", "peak", "center", "width"});
    GaussianPulseProfile p;
    p.peak = number_field("peak");
    p.center = number_field("center");
    p.width = number_field("width");
    if (p.peak < 0.0) ctx.fail(extend(keys, "peak"), "must be >= 0");
    if (!(p.width > 0.0)) ctx.fail(extend(keys, "width"), "must be > 0");
    return p;
  }
  ctx.fail(extend(keys, "type"), "unknown profile type (constant | window | gaussian_pulse)");
}

ScenarioConfig scenario_from_json(const ParseContext& ctx, const json& j,
                                  const std::vector<std::string>& keys) {
  if (!j.is_object()) ctx.fail(keys, "expected an object");
  check_keys(ctx, j, keys,
             {"mode", "allow_direct_fourth", "detector_positions", "t_end", "dt", "seed",
              "boundary_strategy", "frames", "profiles", "prepared_hits", "hits", "grid",
              "trajectory_stride", "runs"});

  ScenarioConfig cfg;

  if (j.contains("mode")) {
    const auto k = extend(keys, "mode");
    const std::string mode = as_string(ctx, j.at("mode"), k);
    if (mode == "observed") {
      cfg.mode = MeasurementMode::Observed;
    } else if (mode == "objective") {
      cfg.mode = MeasurementMode::Objective;
    } else {
      ctx.fail(k, "must be \"observed\" or \"objective\"");
    }
  }

  if (j.contains("allow_direct_fourth")) {
    cfg.allow_direct_fourth =
        as_bool(ctx, j.at("allow_direct_fourth"), extend(keys, "allow_direct_fourth"));
  }
  if (cfg.allow_direct_fourth && cfg.mode == MeasurementMode::Observed) {
    ctx.fail(extend(keys, "allow_direct_fourth"),
             "the observed arrangement routes every capture through a single detector");
  }

  if (j.contains("detector_positions")) {
    const auto k = extend(keys, "detector_positions");
    const json& arr = j.at("detector_positions");
    if (!arr.is_array() || arr.size() != 2) ctx.fail(k, "expected an array of two numbers");
    cfg.detector_positions[0] = as_number(ctx, arr[0], k);
    cfg.detector_positions[1] = as_number(ctx, arr[1], k);
    if (cfg.detector_positions[0] == cfg.detector_positions[1]) {
      ctx.fail(k, "detector positions must be distinct");
    }
  }

  if (j.contains("t_end")) {
    const auto k = extend(keys, "t_end");
    cfg.t_end = as_number(ctx, j.at("t_end"), k);
    if (!(cfg.t_end > 0.0)) ctx.fail(k, "must be > 0");
  }
  if (j.contains("dt")) {
    const auto k = extend(keys, "dt");
    cfg.dt = as_number(ctx, j.at("dt"), k);
    if (!(cfg.dt > 0.0)) ctx.fail(k, "must be > 0");
  }

  if (j.contains("seed")) {
    cfg.seed = as_seed(ctx, j.at("seed"), extend(keys, "seed"));
    cfg.has_seed = true;
  }

  if (j.contains("boundary_strategy")) {
    const auto k = extend(keys, "boundary_strategy");
    const std::string s = as_string(ctx, j.at("boundary_strategy"), k);
    if (s == "hellwig_kraus") {
      cfg.strategy = BoundaryStrategy::HellwigKraus;
    } else if (s == "aharonov_albert") {
      cfg.strategy = BoundaryStrategy::AharonovAlbert;
    } else {
      ctx.fail(k, "must be \"hellwig_kraus\" or \"aharonov_albert\"");
    }
  }

  if (j.contains("frames")) {
    const auto k = extend(keys, "frames");
    const json& arr = j.at("frames");
    if (!arr.is_array()) ctx.fail(k, "expected an array of velocities");
    for (const json& v : arr) {
      const double velocity = as_number(ctx, v, k);
      if (!(std::abs(velocity) < 1.0)) ctx.fail(k, "frame speeds must satisfy |v| < 1");
      cfg.frames.push_back(velocity);
    }
  }

  if (j.contains("profiles")) {
    const auto k = extend(keys, "profiles");
    const json& obj = j.at("profiles");
    if (!obj.is_object()) ctx.fail(k, "expected an object keyed by transitions");
    for (const auto& item : obj.items()) {
      const auto pk = extend(k, item.key());
      validate_transition_key(ctx, item.key(), pk);
      cfg.profiles[item.key()] = parse_profile(ctx, item.value(), pk);
    }
  }

  if (j.contains("prepared_hits")) {
    const auto k = extend(keys, "prepared_hits");
    const json& arr = j.at("prepared_hits");
    if (!arr.is_array()) ctx.fail(k, "expected an array");
    double prev = 0.0;
    for (const json& entry : arr) {
      if (!entry.is_object()) ctx.fail(k, "expected objects with \"time\" and \"pattern\"");
      check_keys(ctx, entry, k, {"time", "pattern"});
      if (!entry.contains("time") || !entry.contains("pattern")) {
        ctx.fail(k, "expected objects with \"time\" and \"pattern\"");
      }
      ScenarioConfig::PreparedHit hit;
      hit.time = as_number(ctx, entry.at("time"), extend(k, "time"));
      hit.pattern = as_string(ctx, entry.at("pattern"), extend(k, "pattern"));
      if (hit.time < 0.0) ctx.fail(extend(k, "time"), "must be >= 0");
      if (!valid_pattern(hit.pattern)) ctx.fail(extend(k, "pattern"), "must be two bits, e.g. \"01\"");
      if (!cfg.prepared_hits.empty() && hit.time < prev) {
        ctx.fail(extend(k, "time"), "prepared hit times must be nondecreasing");
      }
      prev = hit.time;
      cfg.prepared_hits.push_back(std::move(hit));
    }
  }

  if (j.contains("hits")) {
    const auto k = extend(keys, "hits");
    const json& arr = j.at("hits");
    if (!arr.is_array()) ctx.fail(k, "expected an array");
    if (arr.size() > 2) ctx.fail(k, "at most two hits (one per detector)");
    for (const json& entry : arr) {
      if (!entry.is_object()) ctx.fail(k, "expected objects with \"t\" and \"x\"");
      check_keys(ctx, entry, k, {"t", "x"});
      if (!entry.contains("t") || !entry.contains("x")) {
        ctx.fail(k, "expected objects with \"t\" and \"x\"");
      }
      SpacetimeEvent ev;
      ev.t = as_number(ctx, entry.at("t"), extend(k, "t"));
      ev.x = as_number(ctx, entry.at("x"), extend(k, "x"));
      cfg.region_hits.push_back(ev);
    }
  }

  if (j.contains("grid")) {
    const auto k = extend(keys, "grid");
    const json& obj = j.at("grid");
    if (!obj.is_object()) ctx.fail(k, "expected an object");
    check_keys(ctx, obj, k, {"t0", "t1", "x0", "x1", "nt", "nx"});
    for (const char* name : {"t0", "t1", "x0", "x1", "nt", "nx"}) {
      if (!obj.contains(name)) ctx.fail(k, std::string("missing \"") + name + "\"");
    }
    cfg.grid.t0 = as_number(ctx, obj.at("t0"), extend(k, "t0"));
    cfg.grid.t1 = as_number(ctx, obj.at("t1"), extend(k, "t1"));
    cfg.grid.x0 = as_number(ctx, obj.at("x0"), extend(k, "x0"));
    cfg.grid.x1 = as_number(ctx, obj.at("x1"), extend(k, "x1"));
    const long long nt = as_integer(ctx, obj.at("nt"), extend(k, "nt"));
    const long long nx = as_integer(ctx, obj.at("nx"), extend(k, "nx"));
    if (nt < 1) ctx.fail(extend(k, "nt"), "must be >= 1");
    if (nx < 1) ctx.fail(extend(k, "nx"), "must be >= 1");
    cfg.grid.nt = static_cast<int>(nt);
    cfg.grid.nx = static_cast<int>(nx);
    cfg.has_grid = true;
  }

  if (j.contains("trajectory_stride")) {
    const auto k = extend(keys, "trajectory_stride");
    const long long stride = as_integer(ctx, j.at("trajectory_stride"), k);
    if (stride < 0) ctx.fail(k, "must be >= 0");
    cfg.trajectory_stride = static_cast<int>(stride);
  }

  if (j.contains("runs")) {
    const auto k = extend(keys, "runs");
    cfg.n_runs = as_integer(ctx, j.at("runs"), k);
    if (cfg.n_runs < 1) ctx.fail(k, "must be >= 1");
  }

  return cfg;
}

}  // namespace

ScenarioConfig parse_scenario_config(const std::string& text, const std::string& source_name) {
  const json root = parse_document(text, source_name);
  const ParseContext ctx{text, source_name};
  return scenario_from_json(ctx, root, {});
}

bool is_causality_config(const std::string& text) {
  try {
    const json root = json::parse(text);
    return root.is_object() && root.contains("arms");
  } catch (const json::parse_error&) {
    return false;
  }
}

CausalityConfig parse_causality_config(const std::string& text, const std::string& source_name) {
  const json root = parse_document(text, source_name);
  const ParseContext ctx{text, source_name};
  if (!root.is_object() || !root.contains("arms")) ctx.fail({}, "missing \"arms\"");
  check_keys(ctx, root, {}, {"arms", "runs", "seed"});

  const json& arms = root.at("arms");
  if (!arms.is_object()) ctx.fail({"arms"}, "expected an object");
  check_keys(ctx, arms, {"arms"}, {"baseline", "with_b_reduction"});
  for (const char* name : {"baseline", "with_b_reduction"}) {
    if (!arms.contains(name)) ctx.fail({"arms"}, std::string("missing \"") + name + "\"");
  }

  CausalityConfig cfg;
  cfg.baseline = scenario_from_json(ctx, arms.at("baseline"), {"arms", "baseline"});
  cfg.with_b_reduction = scenario_from_json(ctx, arms.at("with_b_reduction"),
                                            {"arms", "with_b_reduction"});
  if (root.contains("runs")) {
    const std::vector<std::string> k{"runs"};
    cfg.n_runs = as_integer(ctx, root.at("runs"), k);
    if (cfg.n_runs < 1) ctx.fail(k, "must be >= 1");
  }
  if (root.contains("seed")) {
    cfg.seed = as_seed(ctx, root.at("seed"), {"seed"});
    cfg.has_seed = true;
  }
  return cfg;
}

RunSetup build_run_setup(const ScenarioConfig& config) {
  TemplateOptions options;
  options.allow_direct_fourth = config.allow_direct_fourth;
  options.detector_positions = config.detector_positions;

  RunSetup setup;
  setup.initial = config.mode == MeasurementMode::Observed
                      ? build_observed_template(options)
                      : build_objective_template(2, options);
  setup.model.profiles = config.profiles;
  setup.strategy = config.strategy;
  setup.t_end = config.t_end;
  setup.dt = config.dt;
  setup.trajectory_stride = config.trajectory_stride;

  for (const auto& prep : config.prepared_hits) {
    Superposition& state = setup.initial;
    const int target = state.find_by_pattern(prep.pattern);
    if (target < 0) {
      throw ConfigError("prepared_hits: pattern \"" + prep.pattern +
                        "\" does not name a reachable component");
    }
    // The weight carrier before the preparation determines which detectors
    // the reduction freshly captures.
    int source = 0;
    for (size_t i = 1; i < state.components.size(); ++i) {
      if (state.components[i].weight > state.components[source].weight) {
        source = static_cast<int>(i);
      }
    }

    HitRecord rec;
    rec.time = prep.time;
    rec.chosen_index = target;
    rec.chosen_pattern = prep.pattern;
    rec.prepared = true;
    for (int d = 0; d < 2; ++d) {
      if (state.components[target].detectors[d].level == DetectorLevel::Capture &&
          state.components[source].detectors[d].level == DetectorLevel::Ground) {
        rec.captures.push_back({d, {prep.time, state.detector_positions[d]}});
      }
    }
    rec.dual = rec.captures.size() >= 2;

    const SpacetimeEvent ev = rec.captures.empty()
                                  ? SpacetimeEvent{prep.time, state.detector_positions[0]}
                                  : rec.captures.front().event;
    try {
      apply_reduction(state, {target, ev, config.strategy});
    } catch (const std::exception& e) {
      throw ConfigError("prepared_hits: pattern \"" + prep.pattern + "\": " + e.what());
    }
    rec.chosen_label = state.components[0].label();
    setup.prepared_hits.push_back(std::move(rec));
  }
  setup.initial.time = 0.0;
  return setup;
}

std::string to_string(MeasurementMode mode) {
  return mode == MeasurementMode::Observed ? "observed" : "objective";
}

MeasurementMode measurement_mode_from_string(const std::string& s) {
  if (s == "observed") return MeasurementMode::Observed;
  if (s == "objective") return MeasurementMode::Objective;
  throw ConfigError("unknown mode \"" + s + "\"");
}

BoundaryStrategy boundary_strategy_from_string(const std::string& s) {
  if (s == "hellwig_kraus") return BoundaryStrategy::HellwigKraus;
  if (s == "aharonov_albert") return BoundaryStrategy::AharonovAlbert;
  throw ConfigError("unknown boundary strategy \"" + s + "\"");
}

namespace {

json hit_to_json(const HitRecord& hit) {
  json h;
  h["time"] = hit.time;
  h["chosen_index"] = hit.chosen_index;
  h["chosen_label"] = hit.chosen_label;
  h["chosen_pattern"] = hit.chosen_pattern;
  h["dual"] = hit.dual;
  h["prepared"] = hit.prepared;
  h["captures"] = json::array();
  for (const auto& cap : hit.captures) {
    h["captures"].push_back({{"detector", cap.detector}, {"t", cap.event.t}, {"x", cap.event.x}});
  }
  return h;
}

json diagnostics_to_json(const RunDiagnostics& d) {
  json j;
  j["max_step_modulus_drift"] = d.max_step_modulus_drift;
  j["max_total_modulus_drift"] = d.max_total_modulus_drift;
  j["max_pre_hit_dual_weight"] = d.max_pre_hit_dual_weight;
  j["dual_component_before_first_hit"] = d.dual_component_before_first_hit;
  return j;
}

}  // namespace

std::string serialize_run_log(const RunLog& log) {
  json j;
  j["schema"] = "reduxsim_run_log_v1";
  j["seed"] = log.seed;
  j["mode"] = to_string(log.final_state.mode);
  j["boundary_strategy"] = to_string(log.strategy);
  j["detector_positions"] = {log.final_state.detector_positions[0],
                             log.final_state.detector_positions[1]};

  j["hits"] = json::array();
  for (const auto& hit : log.hits) j["hits"].push_back(hit_to_json(hit));

  j["phantoms"] = json::array();
  for (const auto& mark : log.phantoms) {
    j["phantoms"].push_back(
        {{"time", mark.time}, {"component", mark.component}, {"label", mark.label}});
  }

  j["epochs"] = json::array();
  for (const auto& epoch : log.epochs) {
    j["epochs"].push_back({{"from_time", epoch.from_time}, {"labels", epoch.labels}});
  }

  j["trajectory"] = json::array();
  for (const auto& sample : log.trajectory) {
    j["trajectory"].push_back({{"t", sample.t}, {"weights", sample.weights}});
  }

  j["diagnostics"] = diagnostics_to_json(log.diagnostics);

  json final_state;
  final_state["time"] = log.final_state.time;
  final_state["total_modulus"] = total_modulus(log.final_state);
  final_state["components"] = json::array();
  for (const auto& component : log.final_state.components) {
    final_state["components"].push_back({{"label", component.label()},
                                         {"pattern", component.detector_pattern()},
                                         {"weight", component.weight},
                                         {"phantom", component.phantom},
                                         {"born_at", component.born_at}});
  }
  j["final_state"] = std::move(final_state);
  return j.dump(2) + "\n";
}

std::string serialize_ensemble_stats(const EnsembleStats& stats, const OracleResult* oracle) {
  json j;
  j["schema"] = "reduxsim_ensemble_stats_v1";
  j["n_runs"] = stats.n_runs;
  j["no_hit_count"] = stats.no_hit_count;
  j["counts"] = stats.choice_counts;
  j["frequencies"] = stats.frequencies;
  j["sigma"] = stats.sigma;
  j["mean_first_hit_time"] = stats.mean_first_hit_time;
  json histogram = json::object();
  for (const auto& [hits, count] : stats.hit_count_histogram) {
    histogram[std::to_string(hits)] = count;
  }
  j["hit_count_histogram"] = std::move(histogram);
  j["diagnostics_worst"] = diagnostics_to_json(stats.worst);
  if (oracle) {
    j["oracle"] = {{"selection_probability", oracle->selection_probability},
                   {"survival", oracle->survival}};
  }
  return j.dump(2) + "\n";
}

std::string serialize_invariance_report(const InvarianceReport& report) {
  json j;
  j["schema"] = "reduxsim_invariance_v1";
  j["count"] = report.home_count;
  j["home_count"] = report.home_count;
  j["invariant"] = report.invariant;
  j["dual_hit_present"] = report.dual_hit_present;
  j["anomaly"] = report.anomaly;
  j["per_frame"] = json::array();
  for (const auto& frame : report.per_frame) {
    j["per_frame"].push_back({{"velocity", frame.velocity}, {"count", frame.boundary_count}});
  }
  return j.dump(2) + "\n";
}

std::string serialize_causality_report(const CausalityReport& report, long long n_runs) {
  const auto arm_to_json = [](const CausalityArmResult& arm) {
    json a;
    a["a_capture_count"] = arm.a_capture_count;
    a["a_capture_frequency"] = arm.a_capture_frequency;
    a["oracle_prediction"] = arm.oracle_prediction;
    a["three_sigma"] = arm.three_sigma;
    a["frequencies"] = arm.stats.frequencies;
    a["no_hit_count"] = arm.stats.no_hit_count;
    return a;
  };

  json j;
  j["schema"] = "reduxsim_causality_v1";
  j["n_runs"] = n_runs;
  j["baseline"] = arm_to_json(report.baseline);
  j["with_b_reduction"] = arm_to_json(report.with_b_reduction);
  j["difference"] = report.difference;
  j["difference_three_sigma"] = report.difference_three_sigma;
  j["significant"] = report.significant;
  j["single_run"] = {{"conclusive", report.single_run_conclusive},
                     {"note", report.single_run_note},
                     {"baseline_outcome", report.baseline_single_outcome},
                     {"with_b_reduction_outcome", report.with_b_single_outcome}};
  return j.dump(2) + "\n";
}

ParsedRunLog parse_run_log(const std::string& text, const std::string& source_name) {
  const json j = parse_document(text, source_name);
  try {
    if (!j.is_object() || j.value("schema", "") != std::string("reduxsim_run_log_v1")) {
      throw ConfigError(source_name + ": not a reduxsim_run_log_v1 document");
    }
    ParsedRunLog out;
    out.seed = j.at("seed").get<std::uint64_t>();
    out.mode = j.at("mode").get<std::string>();
    out.strategy = j.at("boundary_strategy").get<std::string>();
    for (const json& h : j.at("hits")) {
      HitRecord rec;
      rec.time = h.at("time").get<double>();
      rec.chosen_index = h.at("chosen_index").get<int>();
      rec.chosen_label = h.at("chosen_label").get<std::string>();
      rec.chosen_pattern = h.at("chosen_pattern").get<std::string>();
      rec.dual = h.at("dual").get<bool>();
      rec.prepared = h.at("prepared").get<bool>();
      for (const json& c : h.at("captures")) {
        rec.captures.push_back(
            {c.at("detector").get<int>(), {c.at("t").get<double>(), c.at("x").get<double>()}});
      }
      out.hits.push_back(std::move(rec));
    }
    if (j.contains("trajectory")) {
      for (const json& s : j.at("trajectory")) {
        TrajectorySample sample;
        sample.t = s.at("t").get<double>();
        sample.weights = s.at("weights").get<std::vector<double>>();
        out.trajectory.push_back(std::move(sample));
      }
    }
    if (j.contains("final_state")) {
      for (const json& c : j.at("final_state").at("components")) {
        out.final_labels.push_back(c.at("label").get<std::string>());
        out.final_weights.push_back(c.at("weight").get<double>());
      }
    }
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(source_name + ": malformed run log: " + e.what());
  }
}

}  // namespace reduxsim
