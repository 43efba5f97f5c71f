#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "reduxsim/rules.hpp"

namespace reduxsim {

// Configurable probability-current profiles. The dynamics carries weight
// along admissible transitions at these rates; no functional form is
// intrinsic to the rules, so profiles are scenario configuration.

struct ConstantProfile {
  double rate = 0.0;
};

// rate on [start, stop), zero outside.
struct WindowProfile {
  double rate = 0.0;
  double start = 0.0;
  double stop = 0.0;
};

struct GaussianPulseProfile {
  double peak = 0.0;
  double center = 0.0;
  double width = 1.0;
};

using CurrentProfile = std::variant<ConstantProfile, WindowProfile, GaussianPulseProfile>;

double profile_rate(const CurrentProfile& profile, double t);

// Whether the remaining integral of the profile past t is nonzero.
bool profile_has_future_current(const CurrentProfile& profile, double t);

// Transitions are keyed by the detector patterns they connect, e.g.
// "00->10". Pattern keys stay meaningful across reductions, so the profile
// for a second capture applies both to the pre-reduction second-order edge
// and to the re-derived edge after a first reduction.
std::string make_transition_key(const std::string& from_pattern, const std::string& to_pattern);

struct CurrentModel {
  std::map<std::string, CurrentProfile> profiles;

  // Instantaneous current on an edge: zero when the edge is inactive, an
  // endpoint is phantom, the source carries no weight, or no profile is
  // configured for the edge's pattern transition.
  double edge_current(const Superposition& state, const TransitionEdge& edge, double t) const;
};

// Deterministic uniform source. The double construction is fixed (53 high
// bits of one engine draw) so logs replay bit-exactly for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

class StepSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Hazard {
  double total = 0.0;
  std::vector<double> per_component;
};

// Probability per unit time of a stochastic choice: per component, the
// positive part of its net inflow divided by the total modulus; phantom
// components contribute zero. Throws std::domain_error when the total
// modulus is not positive.
Hazard hazard(const Superposition& state, const CurrentModel& model, double t);

// One explicit-Euler transfer step of size dt along all active edges.
// Weights are clipped at zero: when a source cannot cover its outflow the
// transfers shrink proportionally. Throws StepSizeError when
// total hazard * dt >= 0.1 (reduce dt), std::invalid_argument for dt <= 0.
void step(Superposition& state, const CurrentModel& model, double dt);

struct SampledHit {
  int component = -1;
  double time = 0.0;
};

// At most one hit per step: with probability total_hazard * dt a hit occurs,
// the component is chosen proportionally to its hazard share, and the hit
// time is uniform within the step. Enforces the same step-size guard as step.
std::optional<SampledHit> sample_hit(const Superposition& state, const CurrentModel& model,
                                     double dt, Rng& rng);

struct CaptureEvent {
  int detector = -1;
  SpacetimeEvent event{};
};

struct HitRecord {
  double time = 0.0;
  int chosen_index = -1;
  std::string chosen_label;
  std::string chosen_pattern;
  // True when the reduction captured both detectors at one stochastic time.
  bool dual = false;
  // True for reductions applied as state preparation rather than sampled.
  bool prepared = false;
  std::vector<CaptureEvent> captures;
};

struct TrajectorySample {
  double t = 0.0;
  std::vector<double> weights;
};

// Component labels in force from a given time; reductions open a new epoch.
struct StructureEpoch {
  double from_time = 0.0;
  std::vector<std::string> labels;
};

struct PhantomMark {
  double time = 0.0;
  int component = -1;
  std::string label;
};

struct RunDiagnostics {
  double max_step_modulus_drift = 0.0;
  double max_total_modulus_drift = 0.0;
  // Largest weight ever seen on a both-captured component before the first
  // stochastic hit (0 when no such component ever exists).
  double max_pre_hit_dual_weight = 0.0;
  bool dual_component_before_first_hit = false;
};

struct RunLog {
  std::uint64_t seed = 0;
  BoundaryStrategy strategy = BoundaryStrategy::HellwigKraus;
  std::vector<HitRecord> hits;  // prepared hits first, then stochastic ones
  std::vector<PhantomMark> phantoms;
  std::vector<StructureEpoch> epochs;
  std::vector<TrajectorySample> trajectory;
  RunDiagnostics diagnostics;
  Superposition final_state;

  int stochastic_hit_count() const;
  const HitRecord* first_stochastic_hit() const;
};

struct RunSetup {
  Superposition initial;
  CurrentModel model;
  BoundaryStrategy strategy = BoundaryStrategy::HellwigKraus;
  double t_end = 1.0;
  double dt = 0.01;
  // Trajectory recorded every stride steps; 0 disables recording.
  int trajectory_stride = 0;
  // Reductions already applied to `initial` during preparation.
  std::vector<HitRecord> prepared_hits;
};

// Steps the state to t_end, applying reductions at sampled hits and marking
// components phantom once their possible future inflow is exactly zero.
// The mode parameter must match the state's own mode.
RunLog run_scenario(const Superposition& initial, const CurrentModel& model,
                    MeasurementMode mode, BoundaryStrategy strategy, double t_end,
                    double dt, Rng& rng, int trajectory_stride = 0,
                    const std::vector<HitRecord>& prepared_hits = {});

RunLog run_scenario(const RunSetup& setup, Rng& rng);

// Boundary counting over the log's reductions for each frame (home frame
// always included). Flags the anomaly of a simultaneous dual capture: one
// boundary in the home frame, two in any boosted frame.
InvarianceReport invariance_report(const RunLog& log, const std::vector<LorentzFrame>& frames);

// Same counting from hit records alone (e.g. hits parsed back from a log file).
InvarianceReport invariance_report_from_hits(const std::vector<HitRecord>& hits,
                                             const std::vector<LorentzFrame>& frames);

}  // namespace reduxsim
