#include "doctest.h"

#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "reduxsim/minkowski.hpp"

using namespace reduxsim;
using doctest::Approx;

TEST_CASE("boost applies the standard velocity transformation") {
  const SpacetimeEvent ev{5.0, 2.0};
  const SpacetimeEvent out = boost(ev, LorentzFrame{0.6});
  CHECK(out.t == Approx(4.75).epsilon(1e-12));
  CHECK(out.x == Approx(-1.25).epsilon(1e-12));
}

TEST_CASE("boost at zero velocity is the identity") {
  const SpacetimeEvent ev{3.25, -7.5};
  const SpacetimeEvent out = boost(ev, LorentzFrame{0.0});
  CHECK(out.t == ev.t);
  CHECK(out.x == ev.x);
}

TEST_CASE("boost fixes the origin for every speed") {
  for (double v : {-0.99, -0.5, 0.0, 0.3, 0.9}) {
    const SpacetimeEvent out = boost({0.0, 0.0}, LorentzFrame{v});
    CHECK(out.t == 0.0);
    CHECK(out.x == 0.0);
  }
}

TEST_CASE("boost rejects speeds at or above light speed") {
  CHECK_THROWS_AS(boost({1.0, 1.0}, LorentzFrame{1.0}), std::domain_error);
  CHECK_THROWS_AS(boost({1.0, 1.0}, LorentzFrame{-1.0}), std::domain_error);
  CHECK_THROWS_AS(boost({1.0, 1.0}, LorentzFrame{1.5}), std::domain_error);
}

TEST_CASE("boost round-trips through the opposite velocity") {
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> speed(-0.95, 0.95);
  for (int i = 0; i < 500; ++i) {
    const SpacetimeEvent ev{coord(gen), coord(gen)};
    const double v = speed(gen);
    const SpacetimeEvent back = boost(boost(ev, LorentzFrame{v}), LorentzFrame{-v});
    CHECK(back.t == Approx(ev.t).epsilon(1e-12));
    CHECK(back.x == Approx(ev.x).epsilon(1e-12));
  }
}

TEST_CASE("hk_boundary_time is the backward light cone of the hit") {
  const SpacetimeEvent hit{5.0, 2.0};
  CHECK(hk_boundary_time(hit, 2.0) == 5.0);  // apex
  CHECK(hk_boundary_time(hit, 6.0) == 1.0);
  CHECK(hk_boundary_time(hit, -2.0) == 1.0);
  CHECK(hk_boundary_time({0.0, 0.0}, -3.0) == -3.0);
}

TEST_CASE("hk boundary equals the hit time at the hit position exactly") {
  std::mt19937 gen(99);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const SpacetimeEvent hit{coord(gen), coord(gen)};
    CHECK(hk_boundary_time(hit, hit.x) == hit.t);
  }
}

TEST_CASE("classify_hk splits spacetime by the two backward cones") {
  const std::optional<SpacetimeEvent> a{{5.0, 2.0}};
  const std::optional<SpacetimeEvent> b{{6.0, 10.0}};

  CHECK(classify_hk({0.0, 6.0}, a, b) == RegionLabel::PreBoth);
  CHECK(classify_hk({20.0, 5.0}, a, b) == RegionLabel::PostBoth);
  // (0, 0): above B's cone (6 - 10 = -4) yet below A's (5 - 2 = 3).
  CHECK(classify_hk({0.0, 0.0}, a, b) == RegionLabel::PostBOnly);
  // (0, 12): above A's cone (5 - 10 = -5) yet below B's (6 - 2 = 4).
  CHECK(classify_hk({0.0, 12.0}, a, b) == RegionLabel::PostAOnly);
}

TEST_CASE("an event on a cone surface counts as post-reduction") {
  const std::optional<SpacetimeEvent> a{{5.0, 2.0}};
  const std::optional<SpacetimeEvent> b{{6.0, 10.0}};
  // t = 5 - |6 - 2| = 1: exactly on the boundary of hit A, still below hit
  // B's boundary there (6 - 4 = 2).
  CHECK(classify_hk({1.0, 6.0}, a, b) == RegionLabel::PostAOnly);
  // The apex itself is post.
  CHECK(classify_hk({5.0, 2.0}, a, std::nullopt) == RegionLabel::PostAOnly);
}

TEST_CASE("classify_hk with a single hit never reports the missing one") {
  const std::optional<SpacetimeEvent> a{{2.0, 0.0}};
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  for (int i = 0; i < 500; ++i) {
    const RegionLabel label = classify_hk({coord(gen), coord(gen)}, a, std::nullopt);
    CHECK((label == RegionLabel::PreBoth || label == RegionLabel::PostAOnly));
  }
  CHECK(classify_hk({100.0, 0.0}, std::nullopt, std::nullopt) == RegionLabel::PreBoth);
}

TEST_CASE("hk labels are invariant under boosts of the whole configuration") {
  std::mt19937 gen(31337);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> speed(-0.99, 0.99);
  for (int i = 0; i < 1000; ++i) {
    const SpacetimeEvent ev{coord(gen), coord(gen)};
    const std::optional<SpacetimeEvent> a{{coord(gen), coord(gen)}};
    const std::optional<SpacetimeEvent> b{{coord(gen), coord(gen)}};
    const LorentzFrame frame{speed(gen)};
    const RegionLabel home = classify_hk(ev, a, b);
    const RegionLabel boosted =
        classify_hk(boost(ev, frame), boost(*a, frame), boost(*b, frame));
    CHECK(home == boosted);
  }
}

TEST_CASE("classify_aa uses the constant-time surface of the chosen frame") {
  const std::optional<SpacetimeEvent> a{{1.0, 0.0}};
  const std::optional<SpacetimeEvent> b{{1.2, 10.0}};

  SUBCASE("home frame orders by coordinate time") {
    CHECK(classify_aa({0.95, 0.0}, a, b, LorentzFrame{0.0}) == RegionLabel::PreBoth);
    CHECK(classify_aa({1.1, 3.0}, a, b, LorentzFrame{0.0}) == RegionLabel::PostAOnly);
    CHECK(classify_aa({2.0, 3.0}, a, b, LorentzFrame{0.0}) == RegionLabel::PostBoth);
  }

  SUBCASE("an event simultaneous with a hit is post") {
    CHECK(classify_aa({1.0, 3.0}, a, b, LorentzFrame{0.0}) == RegionLabel::PostAOnly);
    CHECK(classify_aa({1.2, -4.0}, a, b, LorentzFrame{0.0}) == RegionLabel::PostBoth);
  }

  SUBCASE("the label of a fixed event depends on the frame") {
    const SpacetimeEvent x{0.95, 0.0};
    CHECK(classify_aa(x, a, b, LorentzFrame{0.0}) == RegionLabel::PreBoth);
    CHECK(classify_aa(x, a, b, LorentzFrame{0.5}) == RegionLabel::PostBOnly);
  }
}

TEST_CASE("interval classifies separations and yields proper time") {
  const IntervalResult tl = interval({0.0, 0.0}, {5.0, 3.0});
  CHECK(tl.kind == IntervalKind::Timelike);
  REQUIRE(tl.proper_time.has_value());
  CHECK(*tl.proper_time == Approx(4.0).epsilon(1e-15));

  const IntervalResult ll = interval({0.0, 0.0}, {3.0, 3.0});
  CHECK(ll.kind == IntervalKind::Lightlike);
  CHECK_FALSE(ll.proper_time.has_value());

  const IntervalResult sl = interval({0.0, 0.0}, {3.0, 5.0});
  CHECK(sl.kind == IntervalKind::Spacelike);
  CHECK_FALSE(sl.proper_time.has_value());
}

TEST_CASE("interval kind and proper time are boost invariant") {
  std::mt19937 gen(555);
  std::uniform_real_distribution<double> coord(-8.0, 8.0);
  std::uniform_real_distribution<double> speed(-0.9, 0.9);
  for (int i = 0; i < 500; ++i) {
    const SpacetimeEvent p{coord(gen), coord(gen)};
    const SpacetimeEvent q{coord(gen), coord(gen)};
    // Near-lightlike separations may flip kind through rounding; skip them.
    const double dt = q.t - p.t;
    const double dx = q.x - p.x;
    if (std::abs(dt * dt - dx * dx) < 1e-9) continue;
    const LorentzFrame frame{speed(gen)};
    const IntervalResult home = interval(p, q);
    const IntervalResult moved = interval(boost(p, frame), boost(q, frame));
    CHECK(home.kind == moved.kind);
    if (home.kind == IntervalKind::Timelike) {
      CHECK(*moved.proper_time == Approx(*home.proper_time).epsilon(1e-10));
    }
  }
}

TEST_CASE("count_boundaries keeps sequential reductions invariant") {
  const std::vector<std::vector<SpacetimeEvent>> captures = {
      {{0.3, -5.0}},
      {{0.9, 5.0}},
  };
  std::vector<LorentzFrame> frames;
  for (double v = -0.8; v <= 0.85; v += 0.2) frames.push_back({v});

  const InvarianceReport report = count_boundaries(captures, frames);
  CHECK(report.home_count == 2);
  CHECK(report.invariant);
  CHECK_FALSE(report.anomaly);
  for (const auto& entry : report.per_frame) {
    CHECK(entry.boundary_count == 2);
  }
}

TEST_CASE("a simultaneous dual capture splits into two boundaries when boosted") {
  const std::vector<std::vector<SpacetimeEvent>> captures = {
      {{1.0, -5.0}, {1.0, 5.0}},
  };
  const InvarianceReport report =
      count_boundaries(captures, {{0.0}, {0.3}, {-0.6}});
  CHECK(report.home_count == 1);
  REQUIRE(report.per_frame.size() == 3);
  CHECK(report.per_frame[0].boundary_count == 1);
  CHECK(report.per_frame[1].boundary_count == 2);
  CHECK(report.per_frame[2].boundary_count == 2);
  CHECK_FALSE(report.invariant);
  CHECK(report.anomaly);
}

TEST_CASE("count_boundaries on an empty record is trivially invariant") {
  const InvarianceReport report = count_boundaries({}, {{0.5}});
  CHECK(report.home_count == 0);
  CHECK(report.invariant);
  CHECK_FALSE(report.anomaly);
}

TEST_CASE("count_boundaries always reports the home frame when none are given") {
  const InvarianceReport report = count_boundaries({{{0.2, 1.0}}}, {});
  REQUIRE(report.per_frame.size() == 1);
  CHECK(report.per_frame[0].velocity == 0.0);
  CHECK(report.per_frame[0].boundary_count == 1);
}

TEST_CASE("region_map samples an inclusive rectangular grid") {
  GridSpec grid;
  grid.t0 = 0.0;
  grid.t1 = 1.0;
  grid.x0 = -1.0;
  grid.x1 = 1.0;
  grid.nt = 3;
  grid.nx = 5;
  const std::optional<SpacetimeEvent> a{{0.5, 0.0}};

  const auto samples =
      region_map(BoundaryStrategy::HellwigKraus, a, std::nullopt, LorentzFrame{0.0}, grid);
  REQUIRE(samples.size() == 15);
  CHECK(samples.front().t == 0.0);
  CHECK(samples.front().x == -1.0);
  CHECK(samples.back().t == 1.0);
  CHECK(samples.back().x == 1.0);
  CHECK(samples[1].x == -0.5);

  // Apex row: on or above the cone from (0.5, 0).
  CHECK(samples[12].t == 1.0);
  CHECK(samples[12].x == 0.0);
  CHECK(samples[12].label == RegionLabel::PostAOnly);
  // Below the cone only at the apex column of the first row.
  CHECK(samples[2].t == 0.0);
  CHECK(samples[2].x == 0.0);
  CHECK(samples[2].label == RegionLabel::PreBoth);
  CHECK(samples[0].label == RegionLabel::PostAOnly);
}

TEST_CASE("region_map handles degenerate single-point grids") {
  GridSpec grid;
  grid.t0 = 2.0;
  grid.t1 = 9.0;
  grid.x0 = 3.0;
  grid.x1 = 9.0;
  grid.nt = 1;
  grid.nx = 1;
  const auto samples = region_map(BoundaryStrategy::HellwigKraus, std::nullopt,
                                  std::nullopt, LorentzFrame{0.0}, grid);
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].t == 2.0);
  CHECK(samples[0].x == 3.0);

  grid.nt = 0;
  CHECK_THROWS_AS(region_map(BoundaryStrategy::HellwigKraus, std::nullopt, std::nullopt,
                             LorentzFrame{0.0}, grid),
                  std::invalid_argument);
}

TEST_CASE("region_map_csv emits one labeled row per grid point") {
  GridSpec grid;
  grid.nt = 2;
  grid.nx = 2;
  const std::optional<SpacetimeEvent> a{{0.5, 0.5}};
  const std::string csv =
      region_map_csv(BoundaryStrategy::HellwigKraus, a, std::nullopt, LorentzFrame{0.0}, grid);

  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "t,x,label");
  int rows = 0;
  while (std::getline(lines, line)) {
    if (!line.empty()) ++rows;
    CHECK(line.find(',') != std::string::npos);
  }
  CHECK(rows == 4);
}

TEST_CASE("enum names render as stable strings") {
  CHECK(to_string(RegionLabel::PreBoth) == "PreBoth");
  CHECK(to_string(RegionLabel::PostAOnly) == "PostAOnly");
  CHECK(to_string(RegionLabel::PostBOnly) == "PostBOnly");
  CHECK(to_string(RegionLabel::PostBoth) == "PostBoth");
  CHECK(to_string(BoundaryStrategy::HellwigKraus) == "hellwig_kraus");
  CHECK(to_string(BoundaryStrategy::AharonovAlbert) == "aharonov_albert");
  CHECK(to_string(IntervalKind::Timelike) == "timelike");
  CHECK(to_string(IntervalKind::Lightlike) == "lightlike");
  CHECK(to_string(IntervalKind::Spacelike) == "spacelike");
}
