#include "sbdt/sequential_dt.hpp"

#include <algorithm>
#include <numeric>

#include "sbdt/random.hpp"

namespace sbdt {
namespace {

template <int D>
class SeqBuilder {
 public:
  SeqBuilder(const PointSet& points, std::uint64_t seed)
      : points_(points), tri_(&points), rng_(seed) {}

  Triangulation<D> run(std::span<const PointId> ids, const InsertionObserver<D>& observer) {
    if (ids.size() < D + 1) {
      throw DegenerateInput("need at least " + std::to_string(D + 1) + " points");
    }
    order_.assign(ids.begin(), ids.end());
    for (std::size_t i = order_.size() - 1; i > 0; --i) {
      std::swap(order_[i], order_[uniform_index(rng_, i + 1)]);
    }
    bootstrap();
    if (observer) observer(tri_, std::span<const PointId>(order_.data(), D + 1));
    for (std::size_t i = D + 1; i < order_.size(); ++i) {
      insert(order_[i]);
      if (observer) observer(tri_, std::span<const PointId>(order_.data(), i + 1));
    }
    return std::move(tri_);
  }

 private:
  Vec<D> coords(PointId id) const { return points_.template at<D>(id); }

  int orientation_of(const std::array<PointId, D + 1>& verts) const {
    std::array<Vec<D>, D + 1> c;
    for (int i = 0; i <= D; ++i) c[i] = coords(verts[i]);
    return orient<D>(c);
  }

  static bool collinear3(const Vec<3>& a, const Vec<3>& b, const Vec<3>& c) {
    // Approximate test; a false zero only delays the pick of the third
    // bootstrap point, it cannot make the final simplex degenerate because
    // the D+1st point is checked with the exact orient.
    const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
    const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
    return (uy * vz - uz * vy) == 0.0 && (uz * vx - ux * vz) == 0.0 && (ux * vy - uy * vx) == 0.0;
  }

  // Finds D+1 affinely independent points in insertion order, moves them to
  // the front, and wraps the first simplex with the star of infinite
  // simplices over its facets.
  void bootstrap() {
    std::vector<std::size_t> pick;
    pick.push_back(0);
    for (std::size_t i = 1; i < order_.size() && pick.size() <= D; ++i) {
      bool independent = false;
      if (pick.size() == 1) {
        independent = coords(order_[pick[0]]) != coords(order_[i]);
      } else if (pick.size() == 2) {
        if constexpr (D == 2) {
          independent =
              orient2(coords(order_[pick[0]]), coords(order_[pick[1]]), coords(order_[i])) != 0;
        } else {
          independent =
              !collinear3(coords(order_[pick[0]]), coords(order_[pick[1]]), coords(order_[i]));
        }
      } else {
        if constexpr (D == 3) {
          independent = orient3(coords(order_[pick[0]]), coords(order_[pick[1]]),
                                coords(order_[pick[2]]), coords(order_[i])) != 0;
        }
      }
      if (independent) pick.push_back(i);
    }
    if (pick.size() < D + 1) throw DegenerateInput("all points affinely dependent");

    std::vector<PointId> reordered;
    reordered.reserve(order_.size());
    for (std::size_t j = 0; j <= D; ++j) reordered.push_back(order_[pick[j]]);
    std::size_t next_pick = 0;
    for (std::size_t r = 0; r < order_.size(); ++r) {
      if (next_pick < pick.size() && pick[next_pick] == r) {
        ++next_pick;
        continue;
      }
      reordered.push_back(order_[r]);
    }
    order_ = std::move(reordered);

    std::array<PointId, D + 1> verts;
    for (int i = 0; i <= D; ++i) verts[i] = order_[i];
    std::sort(verts.begin(), verts.end());
    Simplex<D> s0;
    s0.vertices = verts;
    s0.parity = static_cast<std::int8_t>(orientation_of(verts));
    assert(s0.parity != 0);
    s0.neighbors.fill(kNoSimplex);
    const SimplexId fid = tri_.create(s0);

    std::array<SimplexId, D + 1> inf_ids;
    for (int d = 0; d <= D; ++d) {
      Simplex<D> inf;
      int idx = 0;
      for (int i = 0; i <= D; ++i) {
        if (i != d) inf.vertices[idx++] = verts[i];
      }
      inf.vertices[D] = kInfiniteVertex;
      inf.parity = 0;
      inf.neighbors.fill(kNoSimplex);
      inf.neighbors[D] = fid;
      inf_ids[d] = tri_.create(inf);
      tri_.at(fid).neighbors[d] = inf_ids[d];
    }
    for (int d = 0; d <= D; ++d) {
      Simplex<D>& inf = tri_.at(inf_ids[d]);
      for (int j = 0; j < D; ++j) {
        for (int i = 0; i <= D; ++i) {
          if (verts[i] == inf.vertices[j]) {
            inf.neighbors[j] = inf_ids[i];
            break;
          }
        }
      }
    }
  }

  bool conflict(SimplexId id, const Vec<D>& q, PointId q_id) const {
    const Simplex<D>& s = tri_.at(id);
    if (!s.is_infinite()) {
      std::array<Vec<D>, D + 1> c;
      for (int i = 0; i <= D; ++i) c[i] = coords(s.vertices[i]);
      return in_sphere_tiebroken<D>(c, s.parity, s.vertices, q, q_id);
    }
    return infinite_conflict(s, q, q_id);
  }

  // The circumsphere of an infinite simplex degenerates to the open outer
  // halfspace of its hull facet.
  bool infinite_conflict(const Simplex<D>& s, const Vec<D>& q, PointId q_id) const {
    const Simplex<D>& owner = tri_.at(s.neighbors[D]);
    std::array<Vec<D>, D + 1> pts;
    for (int i = 0; i < D; ++i) pts[i] = coords(s.vertices[i]);
    PointId inner = kInfiniteVertex;
    for (int i = 0; i <= D; ++i) {
      const PointId v = owner.vertices[i];
      bool on_facet = false;
      for (int f = 0; f < D; ++f) on_facet |= (s.vertices[f] == v);
      if (!on_facet) {
        inner = v;
        break;
      }
    }
    assert(is_finite_vertex(inner));
    pts[D] = coords(inner);
    const int inner_sign = orient<D>(pts);
    pts[D] = q;
    const int q_sign = orient<D>(pts);
    if (q_sign == 0) {
      // On the hull facet plane: lowest id is treated as outside.
      for (int f = 0; f < D; ++f) {
        if (s.vertices[f] < q_id) return true;
      }
      return false;
    }
    return q_sign == -inner_sign;
  }

  SimplexId random_alive() {
    for (int tries = 0; tries < 64; ++tries) {
      const SimplexId id = static_cast<SimplexId>(uniform_index(rng_, tri_.slot_count()));
      if (tri_.alive(id)) return id;
    }
    for (SimplexId id = 0; id < tri_.slot_count(); ++id) {
      if (tri_.alive(id)) return id;
    }
    return kNoSimplex;
  }

  // Remembering stochastic walk from a random live simplex; returns a
  // simplex in conflict with q (orientation tests only).
  SimplexId locate(const Vec<D>& q, PointId q_id) {
    SimplexId cur = random_alive();
    SimplexId prev = kNoSimplex;
    std::size_t steps = 0;
    const std::size_t budget = 4 * tri_.alive_count();
    for (;;) {
      if (steps++ > budget) {
        cur = random_alive();
        prev = kNoSimplex;
        steps = 0;
      }
      const Simplex<D>& s = tri_.at(cur);
      if (s.is_infinite()) {
        if (infinite_conflict(s, q, q_id)) return cur;
        prev = cur;
        cur = s.neighbors[D];
        continue;
      }
      std::array<Vec<D>, D + 1> c;
      for (int i = 0; i <= D; ++i) c[i] = coords(s.vertices[i]);
      const unsigned rot = static_cast<unsigned>(rng_() % (D + 1));
      int exit_facet = -1;
      for (int k = 0; k <= D; ++k) {
        const int d = static_cast<int>((k + rot) % (D + 1));
        if (prev != kNoSimplex && s.neighbors[d] == prev) continue;
        const Vec<D> saved = c[d];
        c[d] = q;
        const int o = orient<D>(c);
        c[d] = saved;
        if (o != 0 && o != s.parity) {
          exit_facet = d;
          break;
        }
      }
      if (exit_facet < 0) return cur;  // contains q, hence in conflict
      prev = cur;
      cur = s.neighbors[exit_facet];
    }
  }

  void insert(PointId q_id) {
    const Vec<D> q = coords(q_id);
    const SimplexId seed = locate(q, q_id);
    assert(conflict(seed, q, q_id));

    stamp_.resize(tri_.slot_count(), 0);
    epoch_ += 2;
    cavity_.clear();
    boundary_.clear();
    bfs_.clear();
    bfs_.push_back(seed);
    stamp_[seed] = epoch_ | 1;
    while (!bfs_.empty()) {
      const SimplexId id = bfs_.back();
      bfs_.pop_back();
      cavity_.push_back(id);
      const Simplex<D>& s = tri_.at(id);
      for (int d = 0; d <= D; ++d) {
        const SimplexId n = s.neighbors[d];
        assert(n != kNoSimplex);
        bool in_cavity;
        if (stamp_[n] >= epoch_) {
          in_cavity = (stamp_[n] & 1) != 0;
        } else {
          in_cavity = conflict(n, q, q_id);
          stamp_[n] = epoch_ | (in_cavity ? 1u : 0u);
          if (in_cavity) bfs_.push_back(n);
        }
        if (!in_cavity) {
          BoundaryFacet bf;
          bf.outside = n;
          bf.dead_inside = id;
          int idx = 0;
          for (int i = 0; i <= D; ++i) {
            if (i != d) bf.verts[idx++] = s.vertices[i];
          }
          boundary_.push_back(bf);
        }
      }
    }

    for (const SimplexId id : cavity_) tri_.kill(id, true);

    // One new simplex per boundary facet: the facet vertices plus q.
    ridge_entries_.clear();
    for (const BoundaryFacet& bf : boundary_) {
      Simplex<D> ns;
      int idx = 0;
      int q_slot = -1;
      for (int i = 0; i < D; ++i) {
        if (q_slot < 0 && q_id < bf.verts[i]) {
          q_slot = idx;
          ns.vertices[idx++] = q_id;
        }
        ns.vertices[idx++] = bf.verts[i];
      }
      if (q_slot < 0) {
        q_slot = idx;
        ns.vertices[idx++] = q_id;
      }
      ns.neighbors.fill(kNoSimplex);
      ns.neighbors[q_slot] = bf.outside;
      if (ns.vertices[D] == kInfiniteVertex) {
        ns.parity = 0;
      } else {
        ns.parity = static_cast<std::int8_t>(orientation_of(ns.vertices));
        if (ns.parity == 0) {
          throw DegenerateInput("affinely dependent points beyond the tie-break's scope");
        }
      }
      const SimplexId nid = tri_.create(ns);
      Simplex<D>& out = tri_.at(bf.outside);
      const int j = out.index_of_neighbor(bf.dead_inside);
      assert(j >= 0);
      out.neighbors[j] = nid;

      const Simplex<D>& created = tri_.at(nid);
      for (int d = 0; d <= D; ++d) {
        if (created.vertices[d] == q_id) continue;
        RidgeEntry e;
        e.key_sum = 0;
        e.key_xor = 0;
        for (int i = 0; i <= D; ++i) {
          if (i == d) continue;
          const std::uint64_t m = mix64(created.vertices[i]);
          e.key_sum += m;
          e.key_xor ^= m;
        }
        e.simplex = nid;
        e.slot = d;
        ridge_entries_.push_back(e);
      }
    }

    // Each ridge around q is shared by exactly two new simplices.
    std::sort(ridge_entries_.begin(), ridge_entries_.end(),
              [](const RidgeEntry& a, const RidgeEntry& b) {
                if (a.key_sum != b.key_sum) return a.key_sum < b.key_sum;
                if (a.key_xor != b.key_xor) return a.key_xor < b.key_xor;
                return a.simplex < b.simplex;
              });
    assert(ridge_entries_.size() % 2 == 0);
    for (std::size_t i = 0; i + 1 < ridge_entries_.size(); i += 2) {
      const RidgeEntry& a = ridge_entries_[i];
      const RidgeEntry& b = ridge_entries_[i + 1];
      assert(a.key_sum == b.key_sum && a.key_xor == b.key_xor);
      tri_.at(a.simplex).neighbors[a.slot] = b.simplex;
      tri_.at(b.simplex).neighbors[b.slot] = a.simplex;
    }
  }

  const PointSet& points_;
  Triangulation<D> tri_;
  Rng rng_;
  std::vector<PointId> order_;

  struct BoundaryFacet {
    SimplexId outside;
    SimplexId dead_inside;
    std::array<PointId, D> verts;  // sorted; may include the infinite sentinel
  };
  struct RidgeEntry {
    std::uint64_t key_sum;
    std::uint64_t key_xor;
    SimplexId simplex;
    int slot;
  };
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<SimplexId> cavity_;
  std::vector<BoundaryFacet> boundary_;
  std::vector<SimplexId> bfs_;
  std::vector<RidgeEntry> ridge_entries_;
};

}  // namespace

template <int D>
Triangulation<D> triangulate_seq(const PointSet& points, std::span<const PointId> ids,
                                 std::uint64_t seed, const InsertionObserver<D>& observer) {
  SeqBuilder<D> builder(points, seed);
  return builder.run(ids, observer);
}

template <int D>
Triangulation<D> triangulate_seq_all(const PointSet& points, std::uint64_t seed) {
  std::vector<PointId> ids(points.size());
  std::iota(ids.begin(), ids.end(), 0);
  return triangulate_seq<D>(points, ids, seed);
}

template Triangulation<2> triangulate_seq<2>(const PointSet&, std::span<const PointId>,
                                             std::uint64_t, const InsertionObserver<2>&);
template Triangulation<3> triangulate_seq<3>(const PointSet&, std::span<const PointId>,
                                             std::uint64_t, const InsertionObserver<3>&);
template Triangulation<2> triangulate_seq_all<2>(const PointSet&, std::uint64_t);
template Triangulation<3> triangulate_seq_all<3>(const PointSet&, std::uint64_t);

}  // namespace sbdt
