#pragma once

#include <optional>
#include <string>
#include <vector>

namespace reduxsim {

// 1+1 dimensional Minkowski geometry, c = 1 throughout.

struct SpacetimeEvent {
  double t = 0.0;
  double x = 0.0;
};

// Inertial frame reached by a boost of velocity v from the home frame, |v| < 1.
struct LorentzFrame {
  double velocity = 0.0;
};

// How a reduction partitions Minkowski space: along the constant-time
// hypersurface of each frame (AharonovAlbert) or along the backward light
// cone of the hit event (HellwigKraus).
enum class BoundaryStrategy { AharonovAlbert, HellwigKraus };

// The four solution regions produced by up to two reduction boundaries.
enum class RegionLabel { PreBoth, PostAOnly, PostBOnly, PostBoth };

enum class IntervalKind { Timelike, Lightlike, Spacelike };

struct IntervalResult {
  IntervalKind kind = IntervalKind::Spacelike;
  // Present iff kind == Timelike.
  std::optional<double> proper_time;
};

// t' = gamma (t - v x), x' = gamma (x - v t). Throws std::domain_error for |v| >= 1.
SpacetimeEvent boost(const SpacetimeEvent& ev, const LorentzFrame& frame);

// Backward light-cone boundary of a hit, as a time over position:
// t_hit - |x - x_hit|. Equals t_hit at the apex x = x_hit.
double hk_boundary_time(const SpacetimeEvent& hit, double x);

// Light-cone classification. An event on a boundary surface belongs to the
// post-reduction region (>=). Absent hits never trigger.
RegionLabel classify_hk(const SpacetimeEvent& ev,
                        const std::optional<SpacetimeEvent>& hit_a,
                        const std::optional<SpacetimeEvent>& hit_b);

// Constant-time-hypersurface classification evaluated in the given frame.
// Frame-dependent by design: the hypersurface passes through the hit's own
// boosted time. Events and hits are given in home-frame coordinates.
RegionLabel classify_aa(const SpacetimeEvent& ev,
                        const std::optional<SpacetimeEvent>& hit_a,
                        const std::optional<SpacetimeEvent>& hit_b,
                        const LorentzFrame& frame);

// Sign of (dt)^2 - (dx)^2, with proper time when timelike.
IntervalResult interval(const SpacetimeEvent& a, const SpacetimeEvent& b);

std::string to_string(RegionLabel label);
std::string to_string(BoundaryStrategy strategy);
std::string to_string(IntervalKind kind);

struct FrameBoundaryCount {
  double velocity = 0.0;
  int boundary_count = 0;
};

struct InvarianceReport {
  std::vector<FrameBoundaryCount> per_frame;
  int home_count = 0;
  bool invariant = true;
  bool dual_hit_present = false;
  bool anomaly = false;
};

// Counts reduction boundaries per frame. Each inner vector holds the capture
// events of one reduction; captures of the same reduction that stay
// simultaneous in a frame form a single boundary there, so a simultaneous
// dual capture counts once in its home frame and twice in boosted frames.
InvarianceReport count_boundaries(const std::vector<std::vector<SpacetimeEvent>>& hit_captures,
                                  const std::vector<LorentzFrame>& frames);

struct GridSpec {
  double t0 = 0.0;
  double t1 = 1.0;
  double x0 = 0.0;
  double x1 = 1.0;
  int nt = 2;
  int nx = 2;
};

struct RegionSample {
  double t = 0.0;
  double x = 0.0;
  RegionLabel label = RegionLabel::PreBoth;
};

// Samples RegionLabel over a rectangular grid of home-frame coordinates.
// The frame parameter only affects the AharonovAlbert strategy.
std::vector<RegionSample> region_map(BoundaryStrategy strategy,
                                     const std::optional<SpacetimeEvent>& hit_a,
                                     const std::optional<SpacetimeEvent>& hit_b,
                                     const LorentzFrame& frame,
                                     const GridSpec& grid);

// CSV with header "t,x,label".
std::string region_map_csv(BoundaryStrategy strategy,
                           const std::optional<SpacetimeEvent>& hit_a,
                           const std::optional<SpacetimeEvent>& hit_b,
                           const LorentzFrame& frame,
                           const GridSpec& grid);

}  // namespace reduxsim
