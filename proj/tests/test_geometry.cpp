#include "doctest.h"

#include <cmath>

#include "sbdt/geometry.hpp"
#include "sbdt/random.hpp"
#include "support/degenerate_cases.hpp"
#include "support/exact_ref.hpp"

using namespace sbdt;
using namespace sbdt_test;

TEST_CASE("orient 2d canonical cases") {
  CHECK(orient2({0, 0}, {1, 0}, {0, 1}) == 1);
  CHECK(orient2({0, 0}, {1, 0}, {2, 0}) == 0);
  CHECK(orient2({0, 0}, {0, 1}, {1, 0}) == -1);
}

TEST_CASE("orient 3d canonical cases") {
  CHECK(orient3({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}) == 1);
  CHECK(orient3({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}) == 0);
  CHECK(orient3({0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {0, 0, 1}) == -1);
}

TEST_CASE("in_sphere 2d canonical cases") {
  const Vec<2> a{0, 0}, b{2, 0}, c{0, 2};
  CHECK(in_sphere2(a, b, c, {1, 1}) == 1);
  CHECK(in_sphere2(a, b, c, {2, 2}) == 0);
  CHECK(in_sphere2(a, b, c, {5, 5}) == -1);
}

TEST_CASE("in_sphere 3d canonical cases") {
  const Vec<3> a{0, 0, 0}, b{1, 0, 0}, c{0, 1, 0}, d{0, 0, 1};
  CHECK(in_sphere3(a, b, c, d, {0.5, 0.5, 0.5}) == 1);
  CHECK(in_sphere3(a, b, c, d, {1, 1, 1}) == 0);  // on the circumsphere
  CHECK(in_sphere3(a, b, c, d, {2, 2, 2}) == -1);
}

TEST_CASE("circumsphere 2d and 3d") {
  const auto s2 = circumsphere<2>({Vec<2>{0, 0}, Vec<2>{2, 0}, Vec<2>{0, 2}});
  CHECK(s2.center[0] == doctest::Approx(1.0));
  CHECK(s2.center[1] == doctest::Approx(1.0));
  CHECK(s2.radius_squared == doctest::Approx(2.0));

  const auto s3 =
      circumsphere<3>({Vec<3>{0, 0, 0}, Vec<3>{1, 0, 0}, Vec<3>{0, 1, 0}, Vec<3>{0, 0, 1}});
  CHECK(s3.center[0] == doctest::Approx(0.5));
  CHECK(s3.center[1] == doctest::Approx(0.5));
  CHECK(s3.center[2] == doctest::Approx(0.5));
  CHECK(s3.radius_squared == doctest::Approx(0.75));

  CHECK_THROWS_AS(circumsphere<2>({Vec<2>{0, 0}, Vec<2>{1, 0}, Vec<2>{2, 0}}), DegenerateSimplex);
}

TEST_CASE("circumsphere residual on random well-conditioned simplices") {
  Rng rng(7);
  for (int it = 0; it < 500; ++it) {
    std::array<Vec<3>, 4> pts;
    bool ok = true;
    for (auto& p : pts) p = {uniform01(rng), uniform01(rng), uniform01(rng)};
    // Discard badly conditioned draws to stay in the "well-conditioned" regime.
    if (std::abs(orient3(pts[0], pts[1], pts[2], pts[3])) == 0) ok = false;
    const auto vol_proxy = [&] {
      double m[3][3];
      for (int i = 0; i < 3; ++i) {
        for (int d = 0; d < 3; ++d) m[i][d] = pts[i + 1][d] - pts[0][d];
      }
      return std::fabs(m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]));
    }();
    if (!ok || vol_proxy < 1e-3) continue;
    const auto s = circumsphere<3>(pts);
    for (const auto& v : pts) {
      const double r2 = squared_distance<3>(v, s.center);
      CHECK(std::fabs(r2 - s.radius_squared) <= 1e-9 * s.radius_squared);
    }
  }
}

TEST_CASE("box_sphere_overlap trivial and derived cases") {
  Box<3> box{{0, 0, 0}, {1, 1, 1}};
  CHECK(box_sphere_overlap(box, Sphere<3>{{0.5, 0.5, 0.5}, 0.01}));
  CHECK_FALSE(box_sphere_overlap(box, Sphere<3>{{2, 0, 0}, 0.25}));
  // closest point (1, 0.5, 0.5), distance 0.2 <= 0.3
  CHECK(box_sphere_overlap(box, Sphere<3>{{1.2, 0.5, 0.5}, 0.09}));
}

TEST_CASE("box_sphere_overlap matches the clamped-distance formula bit for bit") {
  Rng rng(11);
  for (int it = 0; it < 2000; ++it) {
    Box<2> box;
    for (int d = 0; d < 2; ++d) {
      const double a = 4 * uniform01(rng) - 2, b = 4 * uniform01(rng) - 2;
      box.lo[d] = std::min(a, b);
      box.hi[d] = std::max(a, b);
    }
    Sphere<2> s{{4 * uniform01(rng) - 2, 4 * uniform01(rng) - 2}, uniform01(rng)};
    double d2 = 0;
    for (int d = 0; d < 2; ++d) {
      double g = 0;
      if (s.center[d] < box.lo[d]) g = box.lo[d] - s.center[d];
      if (s.center[d] > box.hi[d]) g = s.center[d] - box.hi[d];
      d2 += g * g;
    }
    CHECK(box_sphere_overlap(box, s) == (d2 <= s.radius_squared));
  }
}

TEST_CASE("halfspace_box_overlap cases") {
  // Plane through (0,0),(0,1), outer side +x (inner reference at x<0).
  const std::array<Vec<2>, 2> facet{Vec<2>{0, 0}, Vec<2>{0, 1}};
  const Vec<2> inner{-1, 0.5};
  CHECK(halfspace_box_overlap<2>(facet, inner, Box<2>{{1, 0}, {2, 1}}));
  CHECK_FALSE(halfspace_box_overlap<2>(facet, inner, Box<2>{{-2, 0}, {-1, 1}}));
  CHECK(halfspace_box_overlap<2>(facet, inner, Box<2>{{-0.5, -0.5}, {0.5, 0.5}}));
  // A box touching the plane exactly does not lie strictly outside.
  CHECK_FALSE(halfspace_box_overlap<2>(facet, inner, Box<2>{{-1, 0}, {0, 1}}));
}

TEST_CASE("in_sphere is invariant under even vertex permutations") {
  Rng rng(13);
  int tested = 0;
  while (tested < 500) {
    std::array<Vec<2>, 3> pts;
    for (auto& p : pts) p = {uniform01(rng), uniform01(rng)};
    if (orient2(pts[0], pts[1], pts[2]) != 1) continue;
    Vec<2> q{2 * uniform01(rng) - 0.5, 2 * uniform01(rng) - 0.5};
    const int base = in_sphere2(pts[0], pts[1], pts[2], q);
    // 3-cycles are even permutations: two transpositions.
    CHECK(in_sphere2(pts[1], pts[2], pts[0], q) == base);
    CHECK(in_sphere2(pts[2], pts[0], pts[1], q) == base);
    ++tested;
  }
  tested = 0;
  while (tested < 500) {
    std::array<Vec<3>, 4> pts;
    for (auto& p : pts) p = {uniform01(rng), uniform01(rng), uniform01(rng)};
    if (orient3(pts[0], pts[1], pts[2], pts[3]) != 1) continue;
    Vec<3> q{uniform01(rng), uniform01(rng), uniform01(rng)};
    const int base = in_sphere3(pts[0], pts[1], pts[2], pts[3], q);
    // swap (0,1) and (2,3): even permutation, orientation preserved.
    CHECK(in_sphere3(pts[1], pts[0], pts[3], pts[2], q) == base);
    // swap (0,2) and (1,3)
    CHECK(in_sphere3(pts[2], pts[3], pts[0], pts[1], q) == base);
    ++tested;
  }
}

TEST_CASE("near-degenerate predicates agree with the rational reference (smoke)") {
  Rng rng(42);
  for (int it = 0; it < 4000; ++it) {
    const auto c = make_orient2_case(rng);
    CHECK(orient2(c.pts[0], c.pts[1], c.pts[2]) == c.expected);
  }
  for (int it = 0; it < 3000; ++it) {
    const auto c = make_orient3_case(rng);
    CHECK(orient3(c.pts[0], c.pts[1], c.pts[2], c.pts[3]) == c.expected);
  }
  for (int it = 0; it < 2000; ++it) {
    const auto c = make_in_sphere2_case(rng);
    CHECK(in_sphere2(c.pts[0], c.pts[1], c.pts[2], c.query) == c.expected);
  }
  for (int it = 0; it < 1000; ++it) {
    const auto c = make_in_sphere3_case(rng);
    CHECK(in_sphere3(c.pts[0], c.pts[1], c.pts[2], c.pts[3], c.query) == c.expected);
  }
}

TEST_CASE("in_sphere tie-break treats the lowest id as outside") {
  // Unit square, all four points cocircular.
  const std::array<Vec<2>, 3> tri{Vec<2>{0, 0}, Vec<2>{1, 0}, Vec<2>{1, 1}};
  const std::array<PointId, 3> ids{0, 1, 2};
  REQUIRE(orient2(tri[0], tri[1], tri[2]) == 1);
  // Query id 3 (not the lowest among {0,1,2,3}): treated inside.
  CHECK(in_sphere_tiebroken<2>(tri, 1, ids, Vec<2>{0, 1}, 3));
  // Same geometry, query id lower than all vertices: treated outside.
  const std::array<PointId, 3> high_ids{5, 6, 7};
  CHECK_FALSE(in_sphere_tiebroken<2>(tri, 1, high_ids, Vec<2>{0, 1}, 3));
}

TEST_CASE("point set deduplication keeps first occurrences") {
  PointSet ps(2);
  const double a[2] = {0.5, 0.25};
  const double b[2] = {0.75, 0.125};
  ps.add(a);
  ps.add(b);
  ps.add(a);
  const auto remap = ps.deduplicate();
  CHECK(ps.size() == 2);
  CHECK(remap[0] == 0);
  CHECK(remap[1] == 1);
  CHECK(remap[2] == 0);
}
