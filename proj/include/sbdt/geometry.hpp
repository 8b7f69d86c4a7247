#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "sbdt/common.hpp"

namespace sbdt {

template <int D>
using Vec = std::array<double, D>;

template <int D>
struct Sphere {
  Vec<D> center;
  double radius_squared;
};

template <int D>
struct Box {
  Vec<D> lo;
  Vec<D> hi;

  bool contains(const Vec<D>& p) const {
    for (int d = 0; d < D; ++d) {
      if (p[d] < lo[d] || p[d] > hi[d]) return false;
    }
    return true;
  }
  void expand(const Vec<D>& p) {
    for (int d = 0; d < D; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  }
  void merge(const Box& other) {
    for (int d = 0; d < D; ++d) {
      lo[d] = std::min(lo[d], other.lo[d]);
      hi[d] = std::max(hi[d], other.hi[d]);
    }
  }
  static Box empty() {
    Box b;
    b.lo.fill(std::numeric_limits<double>::infinity());
    b.hi.fill(-std::numeric_limits<double>::infinity());
    return b;
  }
};

// Flat store of D-dimensional points with dense ids in [0, n).
class PointSet {
 public:
  explicit PointSet(int dim) : dim_(dim) { assert(dim == 2 || dim == 3); }

  int dim() const { return dim_; }
  std::size_t size() const { return coords_.size() / dim_; }

  PointId add(const double* c) {
    coords_.insert(coords_.end(), c, c + dim_);
    return static_cast<PointId>(size() - 1);
  }
  PointId add(std::span<const double> c) {
    assert(c.size() == static_cast<std::size_t>(dim_));
    return add(c.data());
  }

  const double* data(PointId id) const { return coords_.data() + std::size_t(id) * dim_; }
  double coord(PointId id, int d) const { return coords_[std::size_t(id) * dim_ + d]; }

  template <int D>
  Vec<D> at(PointId id) const {
    assert(D == dim_);
    Vec<D> v;
    const double* p = data(id);
    for (int d = 0; d < D; ++d) v[d] = p[d];
    return v;
  }

  template <int D>
  Box<D> bounding_box(std::span<const PointId> ids) const {
    Box<D> b = Box<D>::empty();
    for (PointId id : ids) b.expand(at<D>(id));
    return b;
  }

  // Removes exact coordinate duplicates, keeping the first occurrence.
  // Returns the old-id -> new-id remap table.
  std::vector<PointId> deduplicate();

  std::vector<double>& raw() { return coords_; }
  const std::vector<double>& raw() const { return coords_; }

 private:
  int dim_;
  std::vector<double> coords_;
};

template <int D>
double squared_distance(const Vec<D>& a, const Vec<D>& b) {
  double s = 0;
  for (int d = 0; d < D; ++d) {
    const double t = a[d] - b[d];
    s += t * t;
  }
  return s;
}

// Sign of det(p1-p0, ..., pD-p0): +1 for the canonical positively oriented
// simplex ((0,0),(1,0),(0,1) in 2D), 0 when affinely dependent. The decision
// is exact: a statically filtered binary64 evaluation falls back to exact
// integer arithmetic when the rounding-error bound is not met.
int orient2(const Vec<2>& a, const Vec<2>& b, const Vec<2>& c);
int orient3(const Vec<3>& a, const Vec<3>& b, const Vec<3>& c, const Vec<3>& d);

template <int D>
int orient(const std::array<Vec<D>, D + 1>& pts);
template <>
inline int orient<2>(const std::array<Vec<2>, 3>& p) { return orient2(p[0], p[1], p[2]); }
template <>
inline int orient<3>(const std::array<Vec<3>, 4>& p) { return orient3(p[0], p[1], p[2], p[3]); }

// +1 iff q lies strictly inside the circumhypersphere of the positively
// oriented simplex, 0 on it, -1 outside. Exact decision.
int in_sphere2(const Vec<2>& a, const Vec<2>& b, const Vec<2>& c, const Vec<2>& q);
int in_sphere3(const Vec<3>& a, const Vec<3>& b, const Vec<3>& c, const Vec<3>& d, const Vec<3>& q);

template <int D>
int in_sphere(const std::array<Vec<D>, D + 1>& pts, const Vec<D>& q);
template <>
inline int in_sphere<2>(const std::array<Vec<2>, 3>& p, const Vec<2>& q) {
  return in_sphere2(p[0], p[1], p[2], q);
}
template <>
inline int in_sphere<3>(const std::array<Vec<3>, 4>& p, const Vec<3>& q) {
  return in_sphere3(p[0], p[1], p[2], p[3], q);
}

// in_sphere on a simplex stored in ascending vertex order: `parity` is the
// orientation sign of the stored order (+1 or -1).
template <int D>
int in_sphere_oriented(const std::array<Vec<D>, D + 1>& pts, int parity, const Vec<D>& q) {
  assert(parity == 1 || parity == -1);
  if (parity == 1) return in_sphere<D>(pts, q);
  std::array<Vec<D>, D + 1> swapped = pts;
  std::swap(swapped[0], swapped[1]);
  return in_sphere<D>(swapped, q);
}

// Deterministic resolution of cospherical configurations: on an exact tie the
// point with the lowest id is treated as lying outside the sphere of the
// others. Returns true iff q counts as strictly inside.
template <int D>
bool in_sphere_tiebroken(const std::array<Vec<D>, D + 1>& pts, int parity,
                         const std::array<PointId, D + 1>& vertex_ids, const Vec<D>& q,
                         PointId q_id) {
  const int s = in_sphere_oriented<D>(pts, parity, q);
  if (s != 0) return s > 0;
  for (PointId v : vertex_ids) {
    if (is_finite_vertex(v) && v < q_id) return true;
  }
  return false;
}

// Circumscribed sphere through the D+1 vertices, computed in plain binary64
// from the perpendicular-bisector system. Throws DegenerateSimplex when the
// vertices are affinely dependent (exact orient test). Only used as a
// conservative filter; Delaunay decisions always go through in_sphere.
template <int D>
Sphere<D> circumsphere(const std::array<Vec<D>, D + 1>& pts);

// Relative inflation applied to circumspheres used for intersection
// filtering, so binary64 rounding cannot drop a border simplex.
inline constexpr double kCircumsphereInflation = 1e-10;

template <int D>
Sphere<D> inflated(Sphere<D> s) {
  s.radius_squared *= (1.0 + kCircumsphereInflation);
  return s;
}

// true iff the squared distance from the sphere center to the box (clamped
// per axis) is <= radius_squared.
template <int D>
bool box_sphere_overlap(const Box<D>& box, const Sphere<D>& sphere) {
  double d2 = 0;
  for (int d = 0; d < D; ++d) {
    const double c = sphere.center[d];
    double g = 0;
    if (c < box.lo[d]) {
      g = box.lo[d] - c;
    } else if (c > box.hi[d]) {
      g = c - box.hi[d];
    }
    d2 += g * g;
  }
  return d2 <= sphere.radius_squared;
}

// true iff some box corner lies strictly on the side of the facet hyperplane
// opposite to inner_point (the outer side). Exact orientation decisions.
template <int D>
bool halfspace_box_overlap(const std::array<Vec<D>, D>& facet, const Vec<D>& inner_point,
                           const Box<D>& box);

}  // namespace sbdt
