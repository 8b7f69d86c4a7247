#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace sbdt {

using PointId = std::uint32_t;
using SimplexId = std::uint32_t;
using PartitionId = std::uint32_t;

// Reserved sentinel for the symbolic infinite vertex. It is the largest
// representable id, so ascending vertex order always places it last.
inline constexpr PointId kInfiniteVertex = std::numeric_limits<PointId>::max();
inline constexpr SimplexId kNoSimplex = std::numeric_limits<SimplexId>::max();
inline constexpr PartitionId kNoPartition = std::numeric_limits<PartitionId>::max();

inline bool is_finite_vertex(PointId v) { return v != kInfiniteVertex; }

struct DegenerateSimplex : std::runtime_error {
  DegenerateSimplex() : std::runtime_error("degenerate simplex") {}
  explicit DegenerateSimplex(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateInput : std::runtime_error {
  explicit DegenerateInput(const std::string& what) : std::runtime_error(what) {}
};

struct OracleLimitExceeded : std::runtime_error {
  explicit OracleLimitExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleBalance : std::runtime_error {
  explicit InfeasibleBalance(const std::string& what) : std::runtime_error(what) {}
};

struct KNotPowerOfTwo : std::runtime_error {
  explicit KNotPowerOfTwo(const std::string& what) : std::runtime_error(what) {}
};

struct SampleTooSmall : std::runtime_error {
  explicit SampleTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct InconsistentMerge : std::runtime_error {
  explicit InconsistentMerge(const std::string& what) : std::runtime_error(what) {}
};

struct DanglingFacet : std::runtime_error {
  explicit DanglingFacet(const std::string& what) : std::runtime_error(what) {}
};

struct UndefinedForSinglePart : std::runtime_error {
  explicit UndefinedForSinglePart(const std::string& what) : std::runtime_error(what) {}
};

struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// splitmix64 finalizer; used both as a strong per-id mix for facet keys and
// for deriving independent sub-stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed ^ mix64(tag));
}

}  // namespace sbdt
