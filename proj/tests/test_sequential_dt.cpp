#include "doctest.h"

#include "sbdt/random.hpp"
#include "sbdt/sequential_dt.hpp"
#include "support/exact_ref.hpp"

using namespace sbdt;

namespace {

PointSet uniform_points(int dim, std::size_t n, std::uint64_t seed) {
  PointSet ps(dim);
  Rng rng(seed);
  std::vector<double> c(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (int d = 0; d < dim; ++d) c[d] = uniform01(rng);
    ps.add(std::span<const double>(c));
  }
  return ps;
}

}  // namespace

TEST_CASE("minimal 2d input yields a single triangle") {
  PointSet ps(2);
  for (auto [x, y] : {std::pair{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}) {
    const double c[2] = {x, y};
    ps.add(c);
  }
  const auto t = triangulate_seq_all<2>(ps, 1);
  const auto canon = t.canonicalize();
  REQUIRE(canon.size() == 1);
  CHECK(canon[0] == std::array<PointId, 3>{0, 1, 2});
}

TEST_CASE("four points pick the locally Delaunay diagonal") {
  PointSet ps(2);
  for (auto [x, y] : {std::pair{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {2.0, 2.0}}) {
    const double c[2] = {x, y};
    ps.add(c);
  }
  // Independent oracle over both diagonal choices: the empty-circumcircle
  // test decides for diagonal 1-2.
  using sbdt_test::ref_in_sphere;
  const auto a = ps.at<2>(0), b = ps.at<2>(1), c = ps.at<2>(2), d = ps.at<2>(3);
  REQUIRE(ref_in_sphere<2>({a, b, c}, d) == -1);  // (2,2) outside circle of {0,1,2}
  const auto t = triangulate_seq_all<2>(ps, 123);
  const auto canon = t.canonicalize();
  REQUIRE(canon.size() == 2);
  CHECK(canon[0] == std::array<PointId, 3>{0, 1, 2});
  CHECK(canon[1] == std::array<PointId, 3>{1, 2, 3});
}

TEST_CASE("1000 uniform 3d points triangulate validly with sane density") {
  PointSet ps = uniform_points(3, 1000, 77);
  const auto t = triangulate_seq_all<3>(ps, 77);
  const auto report = validate_delaunay<3>(t, ps);
  CHECK(report.ok());
  const double ratio = static_cast<double>(t.finite_count()) / 1000.0;
  CHECK(ratio >= 4.0);
  CHECK(ratio <= 8.0);
}

TEST_CASE("triangulation stays Delaunay after every insertion") {
  PointSet ps2 = uniform_points(2, 120, 5);
  triangulate_seq<2>(
      ps2, [&] {
        std::vector<PointId> ids(ps2.size());
        std::iota(ids.begin(), ids.end(), 0);
        return ids;
      }(),
      31,
      [&](const Triangulation<2>& t, std::span<const PointId> inserted) {
        const auto report = validate_delaunay<2>(t, ps2, inserted);
        CHECK(report.ok());
      });

  PointSet ps3 = uniform_points(3, 80, 6);
  triangulate_seq<3>(
      ps3, [&] {
        std::vector<PointId> ids(ps3.size());
        std::iota(ids.begin(), ids.end(), 0);
        return ids;
      }(),
      32,
      [&](const Triangulation<3>& t, std::span<const PointId> inserted) {
        const auto report = validate_delaunay<3>(t, ps3, inserted);
        CHECK(report.ok());
      });
}

TEST_CASE("insertion order invariance") {
  PointSet ps = uniform_points(2, 300, 8);
  const auto canon1 = triangulate_seq_all<2>(ps, 1).canonicalize();
  const auto canon2 = triangulate_seq_all<2>(ps, 999).canonicalize();
  const auto canon3 = triangulate_seq_all<2>(ps, 123456).canonicalize();
  CHECK(canon1 == canon2);
  CHECK(canon1 == canon3);
}

TEST_CASE("degenerate input is rejected") {
  PointSet ps(2);
  for (int i = 0; i < 5; ++i) {
    const double c[2] = {static_cast<double>(i), 2.0 * i};
    ps.add(c);
  }
  CHECK_THROWS_AS(triangulate_seq_all<2>(ps, 1), DegenerateInput);

  PointSet tiny(2);
  const double c[2] = {0, 0};
  tiny.add(c);
  CHECK_THROWS_AS(triangulate_seq_all<2>(tiny, 1), DegenerateInput);
}

TEST_CASE("cocircular square resolves deterministically via the tie-break") {
  PointSet ps(2);
  for (auto [x, y] : {std::pair{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}) {
    const double c[2] = {x, y};
    ps.add(c);
  }
  // The lowest id (0) counts as outside, so triangle {0,1,2} conflicts with
  // point 3 and the diagonal 1-3 wins.
  const auto expected = std::vector<std::array<PointId, 3>>{{0, 1, 3}, {1, 2, 3}};
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const auto t = triangulate_seq_all<2>(ps, seed);
    CHECK(t.canonicalize() == expected);
    CHECK(validate_delaunay<2>(t, ps).ok());
  }
}

TEST_CASE("3d cospherical points are tie-broken consistently") {
  // Five lattice points on the sphere x^2+y^2+z^2 = 9, chosen so that no
  // four are coplanar: the tie-break is exercised without affine degeneracy.
  PointSet ps(3);
  const double coords[5][3] = {{3, 0, 0}, {0, 3, 0}, {0, 0, 3}, {1, 2, 2}, {-2, 1, 2}};
  for (const auto& c : coords) ps.add(c);
  for (int skip = 0; skip < 5; ++skip) {
    std::array<Vec<3>, 4> sub;
    int idx = 0;
    for (int i = 0; i < 5; ++i) {
      if (i != skip) sub[idx++] = ps.at<3>(i);
    }
    REQUIRE(sbdt_test::ref_orient<3>(sub) != 0);
  }
  const auto canon = triangulate_seq_all<3>(ps, 1).canonicalize();
  CHECK(validate_delaunay<3>(triangulate_seq_all<3>(ps, 1), ps).ok());
  for (std::uint64_t seed : {7, 8, 9, 10, 11}) {
    CHECK(triangulate_seq_all<3>(ps, seed).canonicalize() == canon);
  }
}
