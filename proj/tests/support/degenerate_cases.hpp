#pragma once

// Generators for randomized near-degenerate predicate cases: points on a
// common line / circle / plane / sphere, rounded to binary64 and perturbed by
// a few ulps, so the binary64 fast path cannot decide and the exact fallback
// is exercised.

#include <cmath>

#include "sbdt/geometry.hpp"
#include "sbdt/random.hpp"
#include "support/exact_ref.hpp"

namespace sbdt_test {

inline double perturb_ulps(sbdt::Rng& rng, double x, int max_ulps) {
  const int k = static_cast<int>(sbdt::uniform_index(rng, 2 * max_ulps + 1)) - max_ulps;
  for (int i = 0; i < k; ++i) x = std::nextafter(x, std::numeric_limits<double>::infinity());
  for (int i = 0; i > k; --i) x = std::nextafter(x, -std::numeric_limits<double>::infinity());
  return x;
}

struct Orient2Case {
  std::array<sbdt::Vec<2>, 3> pts;
  int expected;
};

inline Orient2Case make_orient2_case(sbdt::Rng& rng) {
  Orient2Case c;
  sbdt::Vec<2> a{sbdt::uniform01(rng), sbdt::uniform01(rng)};
  sbdt::Vec<2> b{sbdt::uniform01(rng), sbdt::uniform01(rng)};
  const double t = 4.0 * sbdt::uniform01(rng) - 2.0;
  sbdt::Vec<2> p{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  for (int d = 0; d < 2; ++d) p[d] = perturb_ulps(rng, p[d], 2);
  c.pts = {a, b, p};
  c.expected = ref_orient<2>(c.pts);
  return c;
}

struct Orient3Case {
  std::array<sbdt::Vec<3>, 4> pts;
  int expected;
};

inline Orient3Case make_orient3_case(sbdt::Rng& rng) {
  Orient3Case c;
  sbdt::Vec<3> a{sbdt::uniform01(rng), sbdt::uniform01(rng), sbdt::uniform01(rng)};
  sbdt::Vec<3> b{sbdt::uniform01(rng), sbdt::uniform01(rng), sbdt::uniform01(rng)};
  sbdt::Vec<3> v{sbdt::uniform01(rng), sbdt::uniform01(rng), sbdt::uniform01(rng)};
  const double s = 4.0 * sbdt::uniform01(rng) - 2.0;
  const double t = 4.0 * sbdt::uniform01(rng) - 2.0;
  sbdt::Vec<3> p;
  for (int d = 0; d < 3; ++d) {
    p[d] = a[d] + s * (b[d] - a[d]) + t * (v[d] - a[d]);
    p[d] = perturb_ulps(rng, p[d], 2);
  }
  c.pts = {a, b, v, p};
  c.expected = ref_orient<3>(c.pts);
  return c;
}

struct InSphere2Case {
  std::array<sbdt::Vec<2>, 3> pts;
  sbdt::Vec<2> query;
  int expected;
};

inline InSphere2Case make_in_sphere2_case(sbdt::Rng& rng) {
  for (;;) {
    const sbdt::Vec<2> center{sbdt::uniform01(rng), sbdt::uniform01(rng)};
    const double radius = 0.1 + sbdt::uniform01(rng);
    auto on_circle = [&](double angle) {
      return sbdt::Vec<2>{center[0] + radius * std::cos(angle),
                          center[1] + radius * std::sin(angle)};
    };
    std::array<sbdt::Vec<2>, 3> pts;
    for (auto& p : pts) {
      p = on_circle(2.0 * M_PI * sbdt::uniform01(rng));
      for (int d = 0; d < 2; ++d) p[d] = perturb_ulps(rng, p[d], 1);
    }
    if (ref_orient<2>(pts) == 0) continue;
    if (ref_orient<2>(pts) < 0) std::swap(pts[0], pts[1]);
    InSphere2Case c;
    c.pts = pts;
    c.query = on_circle(2.0 * M_PI * sbdt::uniform01(rng));
    for (int d = 0; d < 2; ++d) c.query[d] = perturb_ulps(rng, c.query[d], 1);
    c.expected = ref_in_sphere<2>(c.pts, c.query);
    return c;
  }
}

struct InSphere3Case {
  std::array<sbdt::Vec<3>, 4> pts;
  sbdt::Vec<3> query;
  int expected;
};

inline InSphere3Case make_in_sphere3_case(sbdt::Rng& rng) {
  for (;;) {
    const sbdt::Vec<3> center{sbdt::uniform01(rng), sbdt::uniform01(rng), sbdt::uniform01(rng)};
    const double radius = 0.1 + sbdt::uniform01(rng);
    auto on_sphere = [&](sbdt::Rng& r) {
      double g[4];
      sbdt::gaussian_pair(r, g[0], g[1]);
      sbdt::gaussian_pair(r, g[2], g[3]);
      const double n = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
      return sbdt::Vec<3>{center[0] + radius * g[0] / n, center[1] + radius * g[1] / n,
                          center[2] + radius * g[2] / n};
    };
    std::array<sbdt::Vec<3>, 4> pts;
    for (auto& p : pts) {
      p = on_sphere(rng);
      for (int d = 0; d < 3; ++d) p[d] = perturb_ulps(rng, p[d], 1);
    }
    if (ref_orient<3>(pts) == 0) continue;
    if (ref_orient<3>(pts) < 0) std::swap(pts[0], pts[1]);
    InSphere3Case c;
    c.pts = pts;
    c.query = on_sphere(rng);
    for (int d = 0; d < 3; ++d) c.query[d] = perturb_ulps(rng, c.query[d], 1);
    c.expected = ref_in_sphere<3>(c.pts, c.query);
    return c;
  }
}

}  // namespace sbdt_test
