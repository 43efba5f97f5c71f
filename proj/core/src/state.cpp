#include "reduxsim/state.hpp"

#include <stdexcept>

#include "reduxsim/rules.hpp"

namespace reduxsim {

namespace {

char level_digit(DetectorLevel level) {
  return level == DetectorLevel::Capture ? '1' : '0';
}

const BrainState* brain_of(const Component& c, int observer_id) {
  for (const auto& brain : c.brains) {
    if (brain.observer_id == observer_id) return &brain;
  }
  return nullptr;
}

}  // namespace

std::string Component::label() const {
  std::string out;
  for (size_t i = 0; i < detectors.size(); ++i) {
    const char digit = level_digit(detectors[i].level);
    out += 'D';
    out += digit;
    if (const BrainState* brain = brain_of(*this, static_cast<int>(i))) {
      if (brain->status == BrainStatus::Ready) {
        out += 'b';
        out += digit;
      } else if (brain->status == BrainStatus::Conscious) {
        out += 'B';
        out += digit;
      }
    }
  }
  return out;
}

std::string Component::detector_pattern() const {
  std::string out;
  for (const auto& d : detectors) out += level_digit(d.level);
  return out;
}

bool Component::all_captured() const {
  for (const auto& d : detectors) {
    if (d.level != DetectorLevel::Capture) return false;
  }
  return !detectors.empty();
}

int Superposition::find_by_pattern(const std::string& pattern) const {
  for (size_t i = 0; i < components.size(); ++i) {
    if (components[i].detector_pattern() == pattern) return static_cast<int>(i);
  }
  return -1;
}

double total_modulus(const Superposition& state) {
  double sum = 0.0;
  for (const auto& c : state.components) sum += c.weight;
  return sum;
}

Superposition build_objective_template(int n_detectors, const TemplateOptions& options) {
  if (n_detectors != 2) {
    throw std::invalid_argument("build_objective_template: only 2 detectors supported");
  }
  Superposition state;
  state.mode = MeasurementMode::Objective;
  state.allow_direct_fourth = options.allow_direct_fourth;
  state.detector_positions = options.detector_positions;

  Component root;
  root.detectors.assign(2, DetectorState{});
  root.weight = 1.0;
  state.components.push_back(root);

  derive_descendants(state, 0.0);
  return state;
}

Superposition build_observed_template(const TemplateOptions& options) {
  Superposition state;
  state.mode = MeasurementMode::Observed;
  // A direct dual-capture route belongs to unobserved interactions; the
  // observed arrangement always routes through the single captures.
  state.allow_direct_fourth = false;
  state.detector_positions = options.detector_positions;

  Component root;
  root.detectors.assign(2, DetectorState{});
  root.brains = {{0, BrainStatus::Conscious}, {1, BrainStatus::Conscious}};
  root.weight = 1.0;
  state.components.push_back(root);

  derive_descendants(state, 0.0);
  return state;
}

void mark_phantom(Superposition& state, int index) {
  if (index < 0 || static_cast<size_t>(index) >= state.components.size()) {
    throw std::out_of_range("mark_phantom: component index " + std::to_string(index));
  }
  state.components[index].phantom = true;
  for (auto& edge : state.edges) {
    if (edge.from == index || edge.to == index) edge.active = false;
  }
}

}  // namespace reduxsim
