#include "reduxsim/rules.hpp"

#include <stdexcept>
#include <string>

namespace reduxsim {

namespace {

bool has_ready(const Component& c, int observer_id) {
  for (const auto& brain : c.brains) {
    if (brain.observer_id == observer_id && brain.status == BrainStatus::Ready) return true;
  }
  return false;
}

bool edge_exists(const Superposition& state, int from, int to) {
  for (const auto& edge : state.edges) {
    if (edge.from == from && edge.to == to) return true;
  }
  return false;
}

}  // namespace

bool is_forbidden(const Component& from, const Component& to) {
  for (const auto& brain : from.brains) {
    if (brain.status == BrainStatus::Ready && has_ready(to, brain.observer_id)) return true;
  }
  return false;
}

bool is_forbidden(const TransitionEdge& edge, const Superposition& state) {
  return is_forbidden(state.components.at(edge.from), state.components.at(edge.to));
}

void tag_new_components(Superposition& state, const std::vector<int>& new_indices) {
  for (int idx : new_indices) {
    Component& c = state.components.at(static_cast<size_t>(idx));
    c.brains.clear();
    if (state.mode == MeasurementMode::Observed) {
      for (size_t d = 0; d < c.detectors.size(); ++d) {
        c.brains.push_back({static_cast<int>(d), BrainStatus::Ready});
      }
    }
  }
}

std::vector<int> derive_descendants(Superposition& state, double born_at) {
  std::vector<int> created;

  // Worklist closure: newly created components are scanned in turn, so every
  // admissible chain of captures is materialized up front with zero weight.
  for (size_t wi = 0; wi < state.components.size(); ++wi) {
    if (state.components[wi].phantom) continue;

    const size_t n = state.components[wi].detectors.size();
    std::vector<std::vector<size_t>> capture_sets;
    for (size_t d = 0; d < n; ++d) {
      if (state.components[wi].detectors[d].level == DetectorLevel::Ground) {
        capture_sets.push_back({d});
      }
    }
    if (state.allow_direct_fourth && capture_sets.size() == n && n == 2) {
      capture_sets.push_back({0, 1});
    }

    for (const auto& set : capture_sets) {
      Component candidate = state.components[wi];
      for (size_t d : set) {
        candidate.detectors[d].level = DetectorLevel::Capture;
        candidate.detectors[d].capture_coordinate = state.detector_positions[d];
      }
      candidate.weight = 0.0;
      candidate.phantom = false;
      candidate.decoherent = true;
      candidate.born_at = born_at;
      candidate.brains.clear();
      if (state.mode == MeasurementMode::Observed) {
        for (size_t d = 0; d < n; ++d) {
          candidate.brains.push_back({static_cast<int>(d), BrainStatus::Ready});
        }
      }

      const int from = static_cast<int>(wi);
      int target = state.find_by_pattern(candidate.detector_pattern());
      const Component& endpoint = target >= 0 ? state.components[target] : candidate;
      if (is_forbidden(state.components[wi], endpoint)) continue;

      if (target < 0) {
        state.components.push_back(candidate);
        target = static_cast<int>(state.components.size()) - 1;
        created.push_back(target);
      }
      if (!edge_exists(state, from, target)) {
        state.edges.push_back({from, target, true});
      }
    }
  }
  return created;
}

void apply_reduction(Superposition& state, const ReductionEvent& event) {
  const int idx = event.chosen_index;
  if (idx < 0 || static_cast<size_t>(idx) >= state.components.size()) {
    throw std::out_of_range("apply_reduction: component index " + std::to_string(idx));
  }

  Component chosen = state.components[idx];
  if (chosen.phantom) {
    throw std::invalid_argument("apply_reduction: chosen component is phantom");
  }
  if (chosen.weight == 0.0) {
    bool has_active_in = false;
    for (const auto& edge : state.edges) {
      if (edge.to == idx && edge.active) has_active_in = true;
    }
    if (!has_active_in) {
      throw std::invalid_argument(
          "apply_reduction: chosen component has neither weight nor possible inflow");
    }
  }

  // Renormalization continuity: the survivor takes over the full pre-hit
  // modulus, so the total is unchanged across the reduction.
  chosen.weight = total_modulus(state);
  if (state.mode == MeasurementMode::Observed) {
    for (auto& brain : chosen.brains) {
      if (brain.status == BrainStatus::Ready) brain.status = BrainStatus::Conscious;
    }
  }

  state.components.clear();
  state.edges.clear();
  state.components.push_back(chosen);
  derive_descendants(state, event.event.t);
}

}  // namespace reduxsim
