#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "route_forge/geo.hpp"

namespace route_forge::clusterer {

struct ClusterConfig {
  int min_radius = 1;       // meters
  int max_radius = 10'000;  // meters
  std::size_t max_cluster_size = 500;
  std::size_t min_cluster_size = 35;
  /// Unset means ceil(N / max_cluster_size) for the point set at hand.
  std::optional<std::size_t> min_no_clusters;
};

/// Throws Error(InvalidArgument).
void check_config(const ClusterConfig& config);

enum class Feasibility {
  MaxSizeCap,       // largest cluster fits max_cluster_size
  MinClusterCount,  // at least min_no_clusters clusters
};

/// A partition of point indices. radius[c] is the search radius (meters)
/// that produced cluster c and depth[c] the recursion level it came from.
struct ClusterSet {
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<int> radius;
  std::vector<int> depth;

  std::size_t size() const noexcept { return clusters.size(); }
  std::size_t peak_size() const noexcept;

  friend bool operator==(const ClusterSet&, const ClusterSet&) = default;
};

struct Probe {
  int radius = 0;
  std::size_t cluster_count = 0;
  std::size_t largest = 0;
  bool feasible = false;
};

struct SearchResult {
  ClusterSet clusters;
  int best_radius = 0;
  std::vector<Probe> probes;
};

/// Integer binary search over [min_radius, max_radius]. Each probe runs
/// DBSCAN (min_samples 1); infeasible probes shrink the radius, feasible ones
/// grow it, and the feasible probe with the largest average cluster size
/// wins. Throws Error(NoSolutionFound) when no probe is feasible.
SearchResult binary_search_clusters(std::span<const geo::GeoPoint> points,
                                    const ClusterConfig& config, Feasibility feasibility);

/// Top level searches under MinClusterCount; every cluster above the cap is
/// split again by a search restricted to radii below the parent's best
/// radius. Clusters below min_cluster_size are then merged into their nearest
/// neighbor where the cap allows. Throws Error(NoSolutionFound) or
/// Error(RecursionLimit).
ClusterSet recursive_dbscan(std::span<const geo::GeoPoint> points, const ClusterConfig& config);

inline constexpr int kMaxRecursionDepth = 32;

/// Merges each cluster smaller than min_cluster_size into the cluster with the
/// nearest centroid whose combined size stays within max_cluster_size.
ClusterSet merge_small_clusters(ClusterSet set, std::span<const geo::GeoPoint> points,
                                const ClusterConfig& config);

geo::GeoPoint centroid(std::span<const std::size_t> members,
                       std::span<const geo::GeoPoint> points);

/// Descending size, then ascending centroid-to-depot distance, then lowest
/// member index.
std::vector<std::size_t> cluster_order(const ClusterSet& set, std::span<const geo::GeoPoint> points,
                                       const geo::GeoPoint& depot);

}  // namespace route_forge::clusterer
