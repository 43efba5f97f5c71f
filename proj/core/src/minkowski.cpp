#include "reduxsim/minkowski.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace reduxsim {

SpacetimeEvent boost(const SpacetimeEvent& ev, const LorentzFrame& frame) {
  const double v = frame.velocity;
  if (!(std::abs(v) < 1.0)) {
    throw std::domain_error("boost: frame speed must satisfy |v| < 1, got v=" +
                            std::to_string(v));
  }
  const double gamma = 1.0 / std::sqrt(1.0 - v * v);
  return {gamma * (ev.t - v * ev.x), gamma * (ev.x - v * ev.t)};
}

double hk_boundary_time(const SpacetimeEvent& hit, double x) {
  return hit.t - std::abs(x - hit.x);
}

namespace {

// Post-reduction iff the event lies on or above the hit's backward light
// cone; only the strict interior of the cone is still pre-reduction.
bool hk_post(const SpacetimeEvent& ev, const std::optional<SpacetimeEvent>& hit) {
  if (!hit) return false;
  return ev.t >= hk_boundary_time(*hit, ev.x);
}

RegionLabel combine(bool post_a, bool post_b) {
  if (post_a && post_b) return RegionLabel::PostBoth;
  if (post_a) return RegionLabel::PostAOnly;
  if (post_b) return RegionLabel::PostBOnly;
  return RegionLabel::PreBoth;
}

}  // namespace

RegionLabel classify_hk(const SpacetimeEvent& ev,
                        const std::optional<SpacetimeEvent>& hit_a,
                        const std::optional<SpacetimeEvent>& hit_b) {
  return combine(hk_post(ev, hit_a), hk_post(ev, hit_b));
}

RegionLabel classify_aa(const SpacetimeEvent& ev,
                        const std::optional<SpacetimeEvent>& hit_a,
                        const std::optional<SpacetimeEvent>& hit_b,
                        const LorentzFrame& frame) {
  const SpacetimeEvent evp = boost(ev, frame);
  const auto post = [&](const std::optional<SpacetimeEvent>& hit) {
    if (!hit) return false;
    return evp.t >= boost(*hit, frame).t;
  };
  return combine(post(hit_a), post(hit_b));
}

IntervalResult interval(const SpacetimeEvent& a, const SpacetimeEvent& b) {
  const double dt = b.t - a.t;
  const double dx = b.x - a.x;
  const double s2 = dt * dt - dx * dx;
  if (s2 > 0.0) return {IntervalKind::Timelike, std::sqrt(s2)};
  if (s2 < 0.0) return {IntervalKind::Spacelike, std::nullopt};
  return {IntervalKind::Lightlike, std::nullopt};
}

std::string to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::PreBoth: return "PreBoth";
    case RegionLabel::PostAOnly: return "PostAOnly";
    case RegionLabel::PostBOnly: return "PostBOnly";
    case RegionLabel::PostBoth: return "PostBoth";
  }
  return "?";
}

std::string to_string(BoundaryStrategy strategy) {
  switch (strategy) {
    case BoundaryStrategy::AharonovAlbert: return "aharonov_albert";
    case BoundaryStrategy::HellwigKraus: return "hellwig_kraus";
  }
  return "?";
}

std::string to_string(IntervalKind kind) {
  switch (kind) {
    case IntervalKind::Timelike: return "timelike";
    case IntervalKind::Lightlike: return "lightlike";
    case IntervalKind::Spacelike: return "spacelike";
  }
  return "?";
}

InvarianceReport count_boundaries(const std::vector<std::vector<SpacetimeEvent>>& hit_captures,
                                  const std::vector<LorentzFrame>& frames) {
  InvarianceReport report;

  // Distinct capture times of one reduction in one frame. Captures that stay
  // simultaneous there share a boundary; exact comparison is intended, a
  // simultaneous dual capture shares one time double in its home frame.
  const auto count_in = [&](const LorentzFrame& frame) {
    int count = 0;
    for (const auto& captures : hit_captures) {
      std::vector<double> times;
      for (const auto& ev : captures) {
        const double tp = boost(ev, frame).t;
        bool seen = false;
        for (double known : times) {
          if (known == tp) {
            seen = true;
            break;
          }
        }
        if (!seen) times.push_back(tp);
      }
      count += static_cast<int>(times.size());
    }
    return count;
  };

  report.home_count = count_in(LorentzFrame{0.0});
  if (frames.empty()) {
    report.per_frame.push_back({0.0, report.home_count});
  } else {
    for (const auto& frame : frames) {
      report.per_frame.push_back({frame.velocity, count_in(frame)});
    }
  }

  report.invariant = true;
  for (const auto& entry : report.per_frame) {
    if (entry.boundary_count != report.home_count) report.invariant = false;
  }
  report.anomaly = !report.invariant;
  return report;
}

std::vector<RegionSample> region_map(BoundaryStrategy strategy,
                                     const std::optional<SpacetimeEvent>& hit_a,
                                     const std::optional<SpacetimeEvent>& hit_b,
                                     const LorentzFrame& frame,
                                     const GridSpec& grid) {
  if (grid.nt < 1 || grid.nx < 1) {
    throw std::invalid_argument("region_map: grid needs nt >= 1 and nx >= 1");
  }
  const auto coord = [](double lo, double hi, int n, int i) {
    if (n == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };

  std::vector<RegionSample> samples;
  samples.reserve(static_cast<size_t>(grid.nt) * static_cast<size_t>(grid.nx));
  for (int it = 0; it < grid.nt; ++it) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const SpacetimeEvent ev{coord(grid.t0, grid.t1, grid.nt, it),
                              coord(grid.x0, grid.x1, grid.nx, ix)};
      const RegionLabel label = strategy == BoundaryStrategy::HellwigKraus
                                    ? classify_hk(ev, hit_a, hit_b)
                                    : classify_aa(ev, hit_a, hit_b, frame);
      samples.push_back({ev.t, ev.x, label});
    }
  }
  return samples;
}

std::string region_map_csv(BoundaryStrategy strategy,
                           const std::optional<SpacetimeEvent>& hit_a,
                           const std::optional<SpacetimeEvent>& hit_b,
                           const LorentzFrame& frame,
                           const GridSpec& grid) {
  std::ostringstream out;
  out.precision(17);
  out << "t,x,label\n";
  for (const auto& sample : region_map(strategy, hit_a, hit_b, frame, grid)) {
    out << sample.t << ',' << sample.x << ',' << to_string(sample.label) << '\n';
  }
  return out.str();
}

}  // namespace reduxsim
