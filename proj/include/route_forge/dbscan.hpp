#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "route_forge/geo.hpp"
#include "route_forge/kernels.hpp"

namespace route_forge::dbscan {

struct DbscanParams {
  double epsilon = 0.0;  // radians
  std::size_t min_samples = 1;
};

inline constexpr int kNoise = -1;

/// labels[i] in [0, cluster_count), or kNoise (only possible when
/// min_samples > 1). Cluster ids follow the ascending index of their seed.
struct ClusterLabels {
  std::vector<int> labels;
  int cluster_count = 0;

  /// Members of each cluster in ascending index order; noise is dropped.
  std::vector<std::vector<std::size_t>> groups() const;
};

/// All j with haversine(points[center], points[j]) <= epsilon * kMetersPerRadian,
/// ascending. Throws Error(IndexOutOfRange).
std::vector<std::size_t> region_query(std::span<const geo::GeoPoint> points,
                                      std::size_t center, double epsilon);

/// Classical DBSCAN with seeds taken in ascending index order. With
/// min_samples == 1 the clusters are the connected components of the
/// epsilon-neighborhood graph and are found by union-find instead of
/// expansion; the labels are the same. Throws Error(EmptyInput) and
/// Error(InvalidArgument) for bad parameters.
ClusterLabels dbscan(std::span<const geo::GeoPoint> points, const DbscanParams& params,
                     kernels::Execution exec = kernels::Execution::Parallel);

/// The expansion form of dbscan for any min_samples, using batched region
/// queries.
ClusterLabels expand_clusters(std::span<const geo::GeoPoint> points, const DbscanParams& params,
                              kernels::Execution exec = kernels::Execution::Parallel);

}  // namespace route_forge::dbscan
