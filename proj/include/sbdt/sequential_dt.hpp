#pragma once

#include <functional>
#include <span>

#include "sbdt/triangulation.hpp"

namespace sbdt {

// Observer invoked after every insertion with the ids inserted so far (in
// insertion order); used by the incremental validation tests.
template <int D>
using InsertionObserver =
    std::function<void(const Triangulation<D>&, std::span<const PointId>)>;

// Incremental-insertion (Bowyer-Watson) Delaunay triangulation of the given
// point ids. Insertion order is a seeded random shuffle; the result is the
// unique DT for general-position inputs regardless of seed.
template <int D>
Triangulation<D> triangulate_seq(const PointSet& points, std::span<const PointId> ids,
                                 std::uint64_t seed, const InsertionObserver<D>& observer = {});

template <int D>
Triangulation<D> triangulate_seq_all(const PointSet& points, std::uint64_t seed);

extern template Triangulation<2> triangulate_seq<2>(const PointSet&, std::span<const PointId>,
                                                    std::uint64_t, const InsertionObserver<2>&);
extern template Triangulation<3> triangulate_seq<3>(const PointSet&, std::span<const PointId>,
                                                    std::uint64_t, const InsertionObserver<3>&);
extern template Triangulation<2> triangulate_seq_all<2>(const PointSet&, std::uint64_t);
extern template Triangulation<3> triangulate_seq_all<3>(const PointSet&, std::uint64_t);

}  // namespace sbdt
