#include "sbdt/triangulation.hpp"

#include <atomic>
#include <map>
#include <ostream>
#include <unordered_map>

#include "sbdt/task_pool.hpp"

namespace sbdt {

template <int D>
void Triangulation<D>::compact() {
  std::vector<SimplexId> remap(simplices_.size(), kNoSimplex);
  std::vector<Simplex<D>> packed;
  packed.reserve(alive_count_);
  for (SimplexId id = 0; id < simplices_.size(); ++id) {
    if (simplices_[id].alive) {
      remap[id] = static_cast<SimplexId>(packed.size());
      packed.push_back(simplices_[id]);
    }
  }
  for (auto& s : packed) {
    for (int d = 0; d <= D; ++d) {
      const SimplexId n = s.neighbors[d];
      s.neighbors[d] = (n == kNoSimplex) ? kNoSimplex : remap[n];
    }
  }
  simplices_ = std::move(packed);
  free_.clear();
  facet_index_.clear();
}

template <int D>
std::vector<SimplexId> Triangulation<D>::hull_simplices() const {
  std::vector<SimplexId> out;
  for (SimplexId id = 0; id < simplices_.size(); ++id) {
    const Simplex<D>& s = simplices_[id];
    if (!s.alive) continue;
    if (s.is_infinite()) {
      out.push_back(id);
      continue;
    }
    for (int d = 0; d <= D; ++d) {
      const SimplexId n = s.neighbors[d];
      if (n != kNoSimplex && simplices_[n].alive && simplices_[n].is_infinite()) {
        out.push_back(id);
        break;
      }
    }
  }
  return out;
}

template <int D>
std::vector<std::array<PointId, D + 1>> Triangulation<D>::canonicalize() const {
  std::vector<std::array<PointId, D + 1>> out;
  out.reserve(alive_count_);
  for (const Simplex<D>& s : simplices_) {
    if (s.alive && !s.is_infinite()) out.push_back(s.vertices);
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <int D>
void Triangulation<D>::rebuild_facet_index() {
  facet_index_.clear();
  facet_index_.reserve(alive_count_ * (D + 1));
  for (SimplexId id = 0; id < simplices_.size(); ++id) {
    if (!simplices_[id].alive) continue;
    for (int d = 0; d <= D; ++d) {
      facet_index_.insert(facet_key<D>(simplices_[id], d), id);
    }
  }
  facet_index_.freeze();
}

template <int D>
void Triangulation<D>::export_csv(std::ostream& os) const {
  const auto canon = canonicalize();
  os << "# dim=" << D << " n_points=" << points_->size() << " n_simplices=" << canon.size()
     << "\n";
  for (const auto& verts : canon) {
    for (int i = 0; i <= D; ++i) {
      if (i) os << ',';
      os << verts[i];
    }
    os << '\n';
  }
}

namespace {

template <int D>
using FacetVerts = std::array<PointId, D>;

template <int D>
struct FacetVertsHash {
  std::size_t operator()(const FacetVerts<D>& f) const {
    std::uint64_t h = 0x2545f4914f6cdd1dULL;
    for (PointId v : f) h = mix64(h ^ v);
    return static_cast<std::size_t>(h);
  }
};

template <int D>
FacetVerts<D> facet_of(const std::array<PointId, D + 1>& verts, int opposite) {
  FacetVerts<D> f;
  int idx = 0;
  for (int i = 0; i <= D; ++i) {
    if (i != opposite) f[idx++] = verts[i];
  }
  return f;
}

void add_detail(ValidityReport& r, std::string msg) {
  if (r.details.size() < 20) r.details.push_back(std::move(msg));
}

// Shared empty-circumsphere and coverage scan over bare vertex tuples.
template <int D>
void check_circumspheres(const PointSet& points, std::span<const PointId> ids,
                         const std::vector<std::array<PointId, D + 1>>& tuples,
                         ValidityReport& report, TaskPool* pool) {
  struct SimplexData {
    std::array<Vec<D>, D + 1> coords;
    std::array<PointId, D + 1> verts;
    int parity;
  };
  std::vector<SimplexData> data;
  data.reserve(tuples.size());
  for (const auto& verts : tuples) {
    SimplexData sd;
    sd.verts = verts;
    for (int i = 0; i <= D; ++i) sd.coords[i] = points.at<D>(verts[i]);
    sd.parity = orient<D>(sd.coords);
    data.push_back(sd);
  }

  const std::size_t n_simplices = data.size();
  std::atomic<std::uint64_t> violations{0};
  std::mutex detail_mu;

  auto worker = [&](std::size_t begin, std::size_t end) {
    std::uint64_t local = 0;
    for (std::size_t si = begin; si < end; ++si) {
      const SimplexData& sd = data[si];
      if (sd.parity == 0) {
        ++local;  // degenerate simplex counts as a violation
        continue;
      }
      for (PointId q : ids) {
        if (sd.verts[0] == q || sd.verts[1] == q || sd.verts[2] == q ||
            (D == 3 && sd.verts[D] == q)) {
          continue;
        }
        const Vec<D> qc = points.at<D>(q);
        if (in_sphere_tiebroken<D>(sd.coords, sd.parity, sd.verts, qc, q)) {
          ++local;
          std::scoped_lock lk(detail_mu);
          add_detail(report, "point " + std::to_string(q) + " inside circumsphere of simplex #" +
                                 std::to_string(si));
        }
      }
    }
    violations.fetch_add(local, std::memory_order_relaxed);
  };

  if (pool && pool->concurrency() > 1) {
    pool->parallel_for(n_simplices, std::max<std::size_t>(1, n_simplices / 64 + 1),
                       [&](std::size_t b, std::size_t e) { worker(b, e); });
  } else {
    worker(0, n_simplices);
  }
  report.circumsphere_violations += violations.load();

  // Vertex coverage.
  std::unordered_map<PointId, bool> covered;
  covered.reserve(ids.size() * 2);
  for (PointId id : ids) covered[id] = false;
  for (const auto& verts : tuples) {
    for (int i = 0; i <= D; ++i) {
      auto it = covered.find(verts[i]);
      if (it != covered.end()) it->second = true;
    }
  }
  for (PointId id : ids) {
    if (!covered[id]) {
      ++report.uncovered_points;
      add_detail(report, "point " + std::to_string(id) + " not covered by any simplex");
    }
  }
}

template <int D>
void check_facet_sharing(const std::vector<std::array<PointId, D + 1>>& finite_tuples,
                         const std::vector<std::array<PointId, D + 1>>& infinite_tuples,
                         ValidityReport& report) {
  // Counts (finite owners, infinite owners) per all-finite facet.
  std::unordered_map<FacetVerts<D>, std::pair<int, int>, FacetVertsHash<D>> owners;
  owners.reserve((finite_tuples.size() + infinite_tuples.size()) * (D + 1));
  for (const auto& verts : finite_tuples) {
    for (int d = 0; d <= D; ++d) {
      owners[facet_of<D>(verts, d)].first++;
    }
  }
  for (const auto& verts : infinite_tuples) {
    // Only the facet opposite the infinite vertex is all-finite; the
    // sentinel sorts last.
    owners[facet_of<D>(verts, D)].second++;
  }
  for (const auto& [facet, counts] : owners) {
    const auto [fc, ic] = counts;
    const bool ok = (fc == 2 && ic == 0) || (fc == 1 && ic == 1);
    if (!ok) {
      ++report.facet_violations;
      add_detail(report, "facet owned by " + std::to_string(fc) + " finite / " +
                             std::to_string(ic) + " infinite simplices");
    }
  }
}

}  // namespace

template <int D>
ValidityReport validate_delaunay(const Triangulation<D>& t, const PointSet& points,
                                 std::span<const PointId> subset, std::size_t oracle_limit,
                                 TaskPool* pool) {
  if (subset.size() > oracle_limit) {
    throw OracleLimitExceeded("point set size " + std::to_string(subset.size()) +
                              " exceeds oracle limit " + std::to_string(oracle_limit));
  }
  ValidityReport report;

  std::vector<std::array<PointId, D + 1>> finite_tuples;
  std::vector<std::array<PointId, D + 1>> infinite_tuples;
  t.for_each_alive([&](SimplexId, const Simplex<D>& s) {
    if (s.is_infinite()) {
      infinite_tuples.push_back(s.vertices);
    } else {
      finite_tuples.push_back(s.vertices);
    }
  });
  report.finite_simplices = finite_tuples.size();

  check_circumspheres<D>(points, subset, finite_tuples, report, pool);
  check_facet_sharing<D>(finite_tuples, infinite_tuples, report);

  // Neighbor symmetry over all live simplices.
  t.for_each_alive([&](SimplexId id, const Simplex<D>& s) {
    for (int d = 0; d <= D; ++d) {
      const SimplexId n = s.neighbors[d];
      if (n == kNoSimplex || !t.alive(n)) {
        ++report.neighbor_violations;
        add_detail(report, "simplex " + std::to_string(id) + " has missing neighbor at facet " +
                               std::to_string(d));
        continue;
      }
      const Simplex<D>& nb = t.at(n);
      if (s.shared_vertex_count(nb) != D || nb.index_of_neighbor(id) < 0) {
        ++report.neighbor_violations;
        add_detail(report,
                   "asymmetric neighbor link " + std::to_string(id) + " -> " + std::to_string(n));
      }
    }
  });

  return report;
}

template <int D>
ValidityReport validate_delaunay(const Triangulation<D>& t, const PointSet& points,
                                 std::size_t oracle_limit, TaskPool* pool) {
  std::vector<PointId> ids(points.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<PointId>(i);
  return validate_delaunay<D>(t, points, ids, oracle_limit, pool);
}

template <int D>
ValidityReport validate_simplex_soup(const PointSet& points,
                                     const std::vector<std::array<PointId, D + 1>>& simplices,
                                     std::size_t oracle_limit, TaskPool* pool) {
  if (points.size() > oracle_limit) {
    throw OracleLimitExceeded("point set size " + std::to_string(points.size()) +
                              " exceeds oracle limit " + std::to_string(oracle_limit));
  }
  ValidityReport report;
  report.finite_simplices = simplices.size();
  std::vector<PointId> ids(points.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<PointId>(i);
  check_circumspheres<D>(points, ids, simplices, report, pool);

  // Facet sharing without infinite simplices: every facet must be owned by
  // one or two finite simplices; single owners are hull facets.
  std::unordered_map<FacetVerts<D>, int, FacetVertsHash<D>> owners;
  owners.reserve(simplices.size() * (D + 1));
  for (const auto& verts : simplices) {
    for (int d = 0; d <= D; ++d) owners[facet_of<D>(verts, d)]++;
  }
  for (const auto& [facet, fc] : owners) {
    if (fc > 2) {
      ++report.facet_violations;
      add_detail(report, "facet owned by " + std::to_string(fc) + " simplices");
    }
  }
  return report;
}

template class Triangulation<2>;
template class Triangulation<3>;
template ValidityReport validate_delaunay<2>(const Triangulation<2>&, const PointSet&,
                                             std::span<const PointId>, std::size_t, TaskPool*);
template ValidityReport validate_delaunay<3>(const Triangulation<3>&, const PointSet&,
                                             std::span<const PointId>, std::size_t, TaskPool*);
template ValidityReport validate_delaunay<2>(const Triangulation<2>&, const PointSet&, std::size_t,
                                             TaskPool*);
template ValidityReport validate_delaunay<3>(const Triangulation<3>&, const PointSet&, std::size_t,
                                             TaskPool*);
template ValidityReport validate_simplex_soup<2>(const PointSet&,
                                                 const std::vector<std::array<PointId, 3>>&,
                                                 std::size_t, TaskPool*);
template ValidityReport validate_simplex_soup<3>(const PointSet&,
                                                 const std::vector<std::array<PointId, 4>>&,
                                                 std::size_t, TaskPool*);

}  // namespace sbdt
