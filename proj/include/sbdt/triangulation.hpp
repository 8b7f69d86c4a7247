#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sbdt/geometry.hpp"

namespace sbdt {

using FacetKey = std::uint64_t;

template <int D>
struct Simplex {
  // Vertex ids in ascending order; the infinite sentinel, being the largest
  // id, always sorts last. neighbors[d] shares the facet opposite
  // vertices[d].
  std::array<PointId, D + 1> vertices;
  std::array<SimplexId, D + 1> neighbors;
  PartitionId origin_partition = kNoPartition;
  std::int8_t parity = 0;  // orientation sign of the stored vertex order
  bool border_flag = false;
  bool alive = true;

  bool is_infinite() const { return vertices[D] == kInfiniteVertex; }

  bool contains_vertex(PointId v) const {
    for (int i = 0; i <= D; ++i) {
      if (vertices[i] == v) return true;
    }
    return false;
  }

  int index_of_vertex(PointId v) const {
    for (int i = 0; i <= D; ++i) {
      if (vertices[i] == v) return i;
    }
    return -1;
  }

  int index_of_neighbor(SimplexId s) const {
    for (int i = 0; i <= D; ++i) {
      if (neighbors[i] == s) return i;
    }
    return -1;
  }

  int shared_vertex_count(const Simplex& other) const {
    // Both vertex arrays are sorted ascending.
    int i = 0, j = 0, common = 0;
    while (i <= D && j <= D) {
      if (vertices[i] == other.vertices[j]) {
        ++common;
        ++i;
        ++j;
      } else if (vertices[i] < other.vertices[j]) {
        ++i;
      } else {
        ++j;
      }
    }
    return common;
  }
};

// Order-independent 64-bit key over the D vertex ids of a facet. Collisions
// are permitted; callers verify candidates by vertex-set intersection.
inline FacetKey combine_facet_key(std::uint64_t sum, std::uint64_t xr) {
  return sum ^ (xr << 32 | xr >> 32);
}

template <int D>
FacetKey facet_key(const Simplex<D>& s, int opposite) {
  std::uint64_t sum = 0, xr = 0;
  for (int i = 0; i <= D; ++i) {
    if (i == opposite) continue;
    const std::uint64_t m = mix64(s.vertices[i]);
    sum += m;
    xr ^= m;
  }
  return combine_facet_key(sum, xr);
}

template <int D>
FacetKey facet_key_of_ids(std::span<const PointId> ids) {
  std::uint64_t sum = 0, xr = 0;
  for (PointId v : ids) {
    const std::uint64_t m = mix64(v);
    sum += m;
    xr ^= m;
  }
  return combine_facet_key(sum, xr);
}

// Associative facet-key index with a phase contract: inserts happen in a
// build phase (single-threaded or externally synchronized batches), then
// freeze() sorts the entries, after which lookups may run concurrently.
class FacetIndex {
 public:
  void clear() {
    entries_.clear();
    frozen_ = false;
  }
  void reserve(std::size_t n) { entries_.reserve(n); }

  void insert(FacetKey key, SimplexId s) {
    entries_.push_back(Entry{key, s});
    frozen_ = false;
  }

  void insert_batch(std::span<const std::pair<FacetKey, SimplexId>> batch) {
    for (const auto& [k, s] : batch) entries_.push_back(Entry{k, s});
    frozen_ = false;
  }

  void freeze() {
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
      return a.key < b.key || (a.key == b.key && a.simplex < b.simplex);
    });
    frozen_ = true;
  }

  bool frozen() const { return frozen_; }
  std::size_t size() const { return entries_.size(); }

  // Candidates sharing the key; valid only after freeze().
  template <typename Fn>
  void for_each_candidate(FacetKey key, Fn&& fn) const {
    assert(frozen_);
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const Entry& e, FacetKey k) { return e.key < k; });
    for (; it != entries_.end() && it->key == key; ++it) fn(it->simplex);
  }

 private:
  struct Entry {
    FacetKey key;
    SimplexId simplex;
  };
  std::vector<Entry> entries_;
  bool frozen_ = false;
};

struct ValidityReport {
  std::uint64_t circumsphere_violations = 0;
  std::uint64_t facet_violations = 0;
  std::uint64_t neighbor_violations = 0;
  std::uint64_t uncovered_points = 0;
  std::uint64_t finite_simplices = 0;
  std::vector<std::string> details;  // capped sample of violation descriptions

  bool ok() const {
    return circumsphere_violations == 0 && facet_violations == 0 && neighbor_violations == 0 &&
           uncovered_points == 0;
  }
};

template <int D>
class Triangulation {
 public:
  explicit Triangulation(const PointSet* points) : points_(points) {}

  const PointSet& points() const { return *points_; }

  std::size_t slot_count() const { return simplices_.size(); }
  std::size_t alive_count() const { return alive_count_; }

  const Simplex<D>& at(SimplexId id) const { return simplices_[id]; }
  Simplex<D>& at(SimplexId id) { return simplices_[id]; }
  bool alive(SimplexId id) const { return id < simplices_.size() && simplices_[id].alive; }

  SimplexId create(const Simplex<D>& s) {
    if (!free_.empty()) {
      const SimplexId id = free_.back();
      free_.pop_back();
      simplices_[id] = s;
      simplices_[id].alive = true;
      ++alive_count_;
      return id;
    }
    simplices_.push_back(s);
    simplices_.back().alive = true;
    ++alive_count_;
    return static_cast<SimplexId>(simplices_.size() - 1);
  }

  // Appends a slot without touching the free list (merge keeps ids stable).
  SimplexId append_slot(const Simplex<D>& s) {
    simplices_.push_back(s);
    if (s.alive) ++alive_count_;
    return static_cast<SimplexId>(simplices_.size() - 1);
  }

  void kill(SimplexId id, bool reuse_slot) {
    assert(simplices_[id].alive);
    simplices_[id].alive = false;
    --alive_count_;
    if (reuse_slot) free_.push_back(id);
  }

  template <typename Fn>
  void for_each_alive(Fn&& fn) const {
    for (SimplexId id = 0; id < simplices_.size(); ++id) {
      if (simplices_[id].alive) fn(id, simplices_[id]);
    }
  }

  std::array<Vec<D>, D + 1> vertex_coords(const Simplex<D>& s) const {
    std::array<Vec<D>, D + 1> out;
    for (int i = 0; i <= D; ++i) {
      out[i] = points_->template at<D>(s.vertices[i]);
    }
    return out;
  }

  // Drops tombstones, renumbers simplices and remaps neighbor links.
  void compact();

  // All infinite simplices plus every finite simplex sharing a facet with an
  // infinite one.
  std::vector<SimplexId> hull_simplices() const;

  // Sorted list of the sorted finite vertex-id tuples; the canonical,
  // order-independent representation used for exact equality tests.
  std::vector<std::array<PointId, D + 1>> canonicalize() const;

  std::uint64_t finite_count() const {
    std::uint64_t n = 0;
    for_each_alive([&](SimplexId, const Simplex<D>& s) {
      if (!s.is_infinite()) ++n;
    });
    return n;
  }

  FacetIndex& facet_index() { return facet_index_; }
  const FacetIndex& facet_index() const { return facet_index_; }

  // Rebuilds the facet index over all live simplices and freezes it.
  void rebuild_facet_index();

  // Writes the export format: a header line, then one line per finite
  // simplex with its D+1 vertex ids ascending, rows in canonical order.
  void export_csv(std::ostream& os) const;

  std::vector<Simplex<D>>& raw_simplices() { return simplices_; }
  const std::vector<Simplex<D>>& raw_simplices() const { return simplices_; }

 private:
  const PointSet* points_;
  std::vector<Simplex<D>> simplices_;
  std::vector<SimplexId> free_;
  std::size_t alive_count_ = 0;
  FacetIndex facet_index_;
};

class TaskPool;

// Brute-force Delaunay validity oracle: tests every finite simplex against
// every point with the exact in_sphere predicate (tie-broken), and checks
// facet sharing, neighbor symmetry and vertex coverage. The subset overload
// restricts the point scan and coverage to the given ids (used to validate
// partial triangulations).
template <int D>
ValidityReport validate_delaunay(const Triangulation<D>& t, const PointSet& points,
                                 std::span<const PointId> subset, std::size_t oracle_limit = 20000,
                                 TaskPool* pool = nullptr);

template <int D>
ValidityReport validate_delaunay(const Triangulation<D>& t, const PointSet& points,
                                 std::size_t oracle_limit = 20000, TaskPool* pool = nullptr);

// File-based variant over bare vertex tuples (no neighbor information, as in
// the export format): circumsphere, facet-sharing and coverage checks only.
template <int D>
ValidityReport validate_simplex_soup(const PointSet& points,
                                     const std::vector<std::array<PointId, D + 1>>& simplices,
                                     std::size_t oracle_limit = 20000, TaskPool* pool = nullptr);

extern template class Triangulation<2>;
extern template class Triangulation<3>;
extern template ValidityReport validate_delaunay<2>(const Triangulation<2>&, const PointSet&,
                                                    std::span<const PointId>, std::size_t,
                                                    TaskPool*);
extern template ValidityReport validate_delaunay<3>(const Triangulation<3>&, const PointSet&,
                                                    std::span<const PointId>, std::size_t,
                                                    TaskPool*);
extern template ValidityReport validate_delaunay<2>(const Triangulation<2>&, const PointSet&,
                                                    std::size_t, TaskPool*);
extern template ValidityReport validate_delaunay<3>(const Triangulation<3>&, const PointSet&,
                                                    std::size_t, TaskPool*);
extern template ValidityReport validate_simplex_soup<2>(
    const PointSet&, const std::vector<std::array<PointId, 3>>&, std::size_t, TaskPool*);
extern template ValidityReport validate_simplex_soup<3>(
    const PointSet&, const std::vector<std::array<PointId, 4>>&, std::size_t, TaskPool*);

}  // namespace sbdt
