#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace reduxsim {

enum class DetectorLevel { Ground, Capture };

enum class BrainStatus { Absent, Ready, Conscious };

enum class MeasurementMode { Observed, Objective };

struct DetectorState {
  DetectorLevel level = DetectorLevel::Ground;
  // Present iff level == Capture: where the particle is recorded.
  std::optional<double> capture_coordinate;
};

struct BrainState {
  int observer_id = 0;
  BrainStatus status = BrainStatus::Absent;
};

// One term of the superposition: detector record per site, brain record per
// observer site, square modulus, phantom status.
struct Component {
  std::vector<DetectorState> detectors;
  std::vector<BrainState> brains;
  double weight = 0.0;
  // Phantom components are dynamically inert: no current in or out, excluded
  // from hazard sums, weight frozen until a reduction zeroes them.
  bool phantom = false;
  // Objective-mode reduction eligibility; true for capture components.
  bool decoherent = false;
  double born_at = 0.0;

  // Text form of the component identity, e.g. "D1b1D0b0". Per site: detector
  // level, then the observer's brain if present (lowercase = ready,
  // uppercase = conscious; the digit mirrors the detector level).
  std::string label() const;

  // Detector levels as a bit string, e.g. "10".
  std::string detector_pattern() const;

  bool all_captured() const;
};

// Directed admissible transition between component indices. Edges forbidden
// by the ready-state selection rule are never instantiated; active drops to
// false when an endpoint becomes phantom.
struct TransitionEdge {
  int from = -1;
  int to = -1;
  bool active = true;
};

struct Superposition {
  std::vector<Component> components;
  std::vector<TransitionEdge> edges;
  double time = 0.0;
  MeasurementMode mode = MeasurementMode::Objective;
  // Whether the interaction admits a direct ground-to-dual-capture
  // transition (objective scenarios only).
  bool allow_direct_fourth = false;
  // Fixed detector locations; a capture on detector i is localized there.
  std::array<double, 2> detector_positions{-1.0, 1.0};

  // Index of the component with the given detector pattern, -1 if absent.
  // Patterns identify components uniquely in every reachable state.
  int find_by_pattern(const std::string& pattern) const;
};

struct TemplateOptions {
  bool allow_direct_fourth = false;
  std::array<double, 2> detector_positions{-1.0, 1.0};
};

// Sum of all component weights, phantoms included.
double total_modulus(const Superposition& state);

// Four-component structure for two unobserved detectors: ground-ground,
// each single capture, and the dual capture, weights (1,0,0,0). Transitions
// route through the single captures; a direct route to the dual capture is
// added only when configured. Throws std::invalid_argument unless
// n_detectors == 2.
Superposition build_objective_template(int n_detectors = 2,
                                       const TemplateOptions& options = {});

// Three-component structure for two observed detectors: the conscious
// ground-ground term plus each single capture with ready brain states,
// weights (1,0,0). The dual-capture component is unreachable while both
// observers hold ready states and therefore never instantiated.
Superposition build_observed_template(const TemplateOptions& options = {});

// Flags a component as phantom and deactivates its edges. Idempotent.
// Weight is retained until a later reduction zeroes it.
// Throws std::out_of_range for a bad index.
void mark_phantom(Superposition& state, int index);

}  // namespace reduxsim
