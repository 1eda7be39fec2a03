#pragma once

#include <limits>
#include <unordered_map>

#include "pcnn/core.hpp"

namespace pcnn {

// ---------------------------------------------------------------------------
// Point cloud container. Point order is semantically arbitrary; every
// operator downstream is equivariant or invariant to it.

struct PointCloud {
  std::vector<Vec3> pts;

  PointCloud() = default;
  explicit PointCloud(std::vector<Vec3> p) : pts(std::move(p)) { validate(); }

  std::size_t size() const { return pts.size(); }
  const Vec3& operator[](std::size_t i) const { return pts[i]; }

  void validate() const {
    if (pts.empty()) throw ArgumentError("PointCloud: needs at least one point");
    for (const Vec3& p : pts)
      if (!p.finite()) throw ArgumentError("PointCloud: non-finite coordinate");
  }

  double diameter() const {
    double d2 = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        d2 = std::max(d2, (pts[i] - pts[j]).norm2());
    return std::sqrt(d2);
  }

  /// Index of the lexicographically smallest point; a permutation-invariant
  /// anchor (canonical FPS start at eval time).
  std::size_t lex_min_index() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (lex_less(pts[i], pts[best])) best = i;
    return best;
  }
};

struct SubsetSelection {
  std::size_t parent_size = 0;
  std::vector<std::size_t> indices;

  PointCloud extract(const PointCloud& parent) const {
    std::vector<Vec3> p;
    p.reserve(indices.size());
    for (std::size_t i : indices) p.push_back(parent[i]);
    return PointCloud(std::move(p));
  }
};

struct VoronoiPartition {
  std::size_t cell_count = 0;
  std::vector<std::size_t> assignment;  // parent index -> cell ordinal in the subset
};

// ---------------------------------------------------------------------------
// Farthest point sampling. Greedy: each pick maximizes the min-distance to
// the already-picked set; ties broken by lowest index. Deterministic.

inline SubsetSelection farthest_point_sample(const PointCloud& cloud, std::size_t count,
                                             std::size_t start_index = 0) {
  const std::size_t n = cloud.size();
  if (count < 1 || count > n) throw ArgumentError("farthest_point_sample: count out of range");
  if (start_index >= n) throw ArgumentError("farthest_point_sample: start index out of range");

  SubsetSelection sel;
  sel.parent_size = n;
  sel.indices.reserve(count);
  sel.indices.push_back(start_index);

  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  std::size_t last = start_index;
  for (std::size_t k = 1; k < count; ++k) {
    const Vec3 p = cloud[last];
    std::size_t best = 0;
    double best_d2 = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      min_d2[i] = std::min(min_d2[i], (cloud[i] - p).norm2());
      if (min_d2[i] > best_d2) {
        best_d2 = min_d2[i];
        best = i;
      }
    }
    sel.indices.push_back(best);
    last = best;
  }
  return sel;
}

// ---------------------------------------------------------------------------
// Voronoi assignment: each parent point to its nearest subset point
// (Euclidean), lowest cell ordinal on ties.

inline VoronoiPartition voronoi_assign(const PointCloud& parent, const SubsetSelection& subset) {
  if (subset.parent_size != parent.size())
    throw ArgumentError("voronoi_assign: subset built for a different cloud");
  if (subset.indices.empty()) throw ArgumentError("voronoi_assign: empty subset");
  for (std::size_t idx : subset.indices)
    if (idx >= parent.size()) throw ArgumentError("voronoi_assign: subset index out of range");

  VoronoiPartition part;
  part.cell_count = subset.indices.size();
  part.assignment.resize(parent.size());
  for (std::size_t i = 0; i < parent.size(); ++i) {
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < subset.indices.size(); ++c) {
      const double d2 = (parent[i] - parent[subset.indices[c]]).norm2();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = c;
      }
    }
    part.assignment[i] = best;
  }
  return part;
}

// ---------------------------------------------------------------------------
// Uniform spatial hash grid for fixed-radius neighbor queries.

struct SpatialHashGrid {
  double cell_size = 0.0;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;

  SpatialHashGrid() = default;
  SpatialHashGrid(const PointCloud& cloud, double cell) : cell_size(cell) {
    if (!(cell > 0.0)) throw ArgumentError("SpatialHashGrid: cell_size must be positive");
    buckets.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i)
      buckets[key_of(cloud[i])].push_back(static_cast<std::uint32_t>(i));
  }

  std::int64_t coord(double x) const {
    return static_cast<std::int64_t>(std::floor(x / cell_size));
  }

  std::uint64_t key_of(const Vec3& p) const { return pack(coord(p.x), coord(p.y), coord(p.z)); }

  static std::uint64_t pack(std::int64_t a, std::int64_t b, std::int64_t c) {
    // 21 bits per axis, offset-biased; clouds this library handles sit well inside the range
    auto enc = [](std::int64_t v) -> std::uint64_t {
      return static_cast<std::uint64_t>(v + (1 << 20)) & 0x1FFFFF;
    };
    return (enc(a) << 42) | (enc(b) << 21) | enc(c);
  }
};

/// Exactly the indices i with |x_i - query| <= radius, ascending.
inline std::vector<std::size_t> neighbors_within(const SpatialHashGrid& grid,
                                                 const PointCloud& cloud, const Vec3& query,
                                                 double radius) {
  if (!(radius > 0.0)) throw ArgumentError("neighbors_within: radius must be positive");
  std::vector<std::size_t> out;
  const double r2 = radius * radius;
  const std::int64_t x0 = grid.coord(query.x - radius), x1 = grid.coord(query.x + radius);
  const std::int64_t y0 = grid.coord(query.y - radius), y1 = grid.coord(query.y + radius);
  const std::int64_t z0 = grid.coord(query.z - radius), z1 = grid.coord(query.z + radius);
  for (std::int64_t a = x0; a <= x1; ++a)
    for (std::int64_t b = y0; b <= y1; ++b)
      for (std::int64_t c = z0; c <= z1; ++c) {
        const auto it = grid.buckets.find(SpatialHashGrid::pack(a, b, c));
        if (it == grid.buckets.end()) continue;
        for (std::uint32_t i : it->second)
          if ((cloud[i] - query).norm2() <= r2) out.push_back(i);
      }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pcnn
