#pragma once

#include <vector>

#include "reduxsim/minkowski.hpp"
#include "reduxsim/state.hpp"

namespace reduxsim {

// A stochastic choice of one component, localized at a spacetime event.
struct ReductionEvent {
  int chosen_index = -1;
  // Hit time plus the position of the newly captured detector (the first of
  // them for a dual capture; per-capture events live in the run log).
  SpacetimeEvent event{};
  BoundaryStrategy strategy = BoundaryStrategy::HellwigKraus;
};

// Selection rule: a transition is forbidden iff some observer holds a ready
// brain state in both endpoint components.
bool is_forbidden(const Component& from, const Component& to);
bool is_forbidden(const TransitionEdge& edge, const Superposition& state);

// Newly created components carry ready brain states in observed mode and
// absent ones in objective mode.
void tag_new_components(Superposition& state, const std::vector<int>& new_indices);

// Expands capture descendants of the existing components: every admissible
// single-detector capture, plus the direct dual capture from the all-ground
// component when configured. Candidates reachable only through forbidden
// transitions are never instantiated. Returns indices of created components.
std::vector<int> derive_descendants(Superposition& state, double born_at);

// Applies a reduction: the chosen component takes over the full pre-hit
// modulus, every other component drops to zero and is removed, ready brains
// of the chosen component become conscious in observed mode, and newly
// admissible capture descendants are re-derived with zero weight.
// Throws std::out_of_range for a bad index and std::invalid_argument when
// the chosen component is phantom or has neither weight nor possible inflow.
void apply_reduction(Superposition& state, const ReductionEvent& event);

}  // namespace reduxsim
