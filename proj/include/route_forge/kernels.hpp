#pragma once

// Data-parallel kernels behind the distance matrix and DBSCAN neighborhood
// queries. Every kernel has a Serial and a Parallel (OpenMP) execution; both
// produce identical output and the serial path is the reference in tests.

#include <cstddef>
#include <span>
#include <vector>

#include "route_forge/geo.hpp"

namespace route_forge::kernels {

enum class Execution { Serial, Parallel };

/// Fills a row-major n x n matrix with haversine distances between nodes,
/// where nodes[0] is the depot. Column 0 is zero (open routes).
void fill_distance_matrix(std::span<const geo::GeoPoint> nodes, std::span<double> out,
                          Execution exec);

/// Answers "which points lie within radius_m of point i" exactly under the
/// haversine metric. Brute force up to kBruteForceLimit points, a uniform grid
/// over unit-sphere coordinates above that.
class NeighborIndex {
 public:
  static constexpr std::size_t kBruteForceLimit = 2000;

  NeighborIndex(std::span<const geo::GeoPoint> points, double radius_m);

  std::size_t size() const noexcept { return points_.size(); }
  bool uses_grid() const noexcept { return !cells_.empty(); }

  bool within(std::size_t i, std::size_t j) const noexcept;

  /// Appends all neighbors of `center` (itself included) in ascending order.
  void query(std::size_t center, std::vector<std::size_t>& out) const;

  /// Connected components of the radius graph. labels[i] is the component of
  /// point i; components are numbered by their lowest member index. Returns
  /// the component count.
  int components(std::vector<int>& labels) const;

 private:
  struct Cell {
    long long x, y, z;
    std::vector<std::size_t> members;
  };

  long long cell_coord(double v) const noexcept;
  const Cell* find_cell(long long x, long long y, long long z) const noexcept;

  std::span<const geo::GeoPoint> points_;
  std::vector<double> unit_;  // xyz triples
  double radius_m_;
  double chord_sq_;
  bool everything_ = false;
  double cell_size_ = 0.0;
  std::vector<Cell> cells_;           // sorted by (x, y, z)
  std::vector<std::size_t> cell_of_;  // index into cells_ per point
};

/// Neighbor lists for each center, written to out[k] for centers[k].
void batch_region_query(const NeighborIndex& index, std::span<const std::size_t> centers,
                        std::vector<std::vector<std::size_t>>& out, Execution exec);

}  // namespace route_forge::kernels
