#include <doctest.h>

#include <cmath>

#include "driveloop/geometry.hpp"

using namespace driveloop;

TEST_CASE("wrap_angle maps into [-pi, pi)") {
  CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
  CHECK(wrap_angle(M_PI) == doctest::Approx(-M_PI));
  CHECK(wrap_angle(-M_PI) == doctest::Approx(-M_PI));
  CHECK(wrap_angle(3 * M_PI / 2) == doctest::Approx(-M_PI / 2));
  CHECK(wrap_angle(7 * M_PI) == doctest::Approx(-M_PI));
}

TEST_CASE("polyline projection and arc length") {
  Polyline line({{0, 0}, {10, 0}, {10, 10}});
  CHECK(line.length() == doctest::Approx(20.0));

  auto proj = line.project({4.0, 3.0});
  CHECK(proj.s == doctest::Approx(4.0));
  CHECK(proj.lateral == doctest::Approx(3.0));  // left of +x travel

  proj = line.project({4.0, -2.0});
  CHECK(proj.lateral == doctest::Approx(-2.0));

  proj = line.project({12.0, 5.0});
  CHECK(proj.s == doctest::Approx(15.0));
  CHECK(proj.lateral == doctest::Approx(-2.0));  // right of +y travel

  CHECK(line.point_at(15.0).x == doctest::Approx(10.0));
  CHECK(line.point_at(15.0).y == doctest::Approx(5.0));
  CHECK(line.heading_at(2.0) == doctest::Approx(0.0));
  CHECK(line.heading_at(15.0) == doctest::Approx(M_PI / 2));
}

TEST_CASE("curvature of a sampled arc") {
  // Quarter circle radius 10: heading change rate 0.1 rad/m.
  std::vector<Vec2> pts;
  for (int i = 0; i <= 100; ++i) {
    double a = (M_PI / 2) * i / 100.0;
    pts.push_back({10.0 * std::sin(a), 10.0 * (1.0 - std::cos(a))});
  }
  Polyline arc(pts);
  CHECK(arc.curvature_at(2.0, 4.0) == doctest::Approx(0.1).epsilon(0.02));
}

TEST_CASE("chord_walk places exactly spaced points") {
  // On a straight dense line.
  std::vector<Vec2> dense;
  for (int i = 0; i <= 300; ++i) dense.push_back({i * 0.1, 0.0});
  auto pts = chord_walk(dense, {0, 0}, 20, 1.0);
  REQUIRE(pts.size() == 20);
  Vec2 prev{0, 0};
  for (const Vec2& p : pts) {
    CHECK((p - prev).norm() == doctest::Approx(1.0).epsilon(1e-12));
    prev = p;
  }
  CHECK(pts.back().x == doctest::Approx(20.0));

  // On a circle: chords of length 1 exactly.
  dense.clear();
  for (int i = 0; i <= 5000; ++i) {
    double a = i * 0.0005;
    dense.push_back({8.0 * std::sin(a), 8.0 * (1.0 - std::cos(a))});
  }
  pts = chord_walk(dense, {0, 0}, 20, 1.0);
  prev = {0, 0};
  for (const Vec2& p : pts) {
    CHECK((p - prev).norm() == doctest::Approx(1.0).epsilon(1e-9));
    prev = p;
  }
}

TEST_CASE("obb overlap") {
  Obb a{{0, 0}, 0.0, 2.0, 1.0};
  Obb b{{3.9, 0}, 0.0, 2.0, 1.0};
  CHECK(obb_overlap(a, b));
  Obb c{{4.1, 0}, 0.0, 2.0, 1.0};
  CHECK_FALSE(obb_overlap(a, c));
  // Rotated: diagonal reach.
  Obb d{{0, 2.5}, M_PI / 4, 2.0, 1.0};
  CHECK(obb_overlap(a, d));
  Obb e{{0, 4.0}, M_PI / 4, 2.0, 1.0};
  CHECK_FALSE(obb_overlap(a, e));
}

TEST_CASE("region containment respects pose") {
  Region r{{{10, 0}, M_PI / 2}, 3.0, 1.0};
  CHECK(r.contains({10, 2}));        // along rotated long axis
  CHECK_FALSE(r.contains({12, 0}));  // outside rotated short axis
}
