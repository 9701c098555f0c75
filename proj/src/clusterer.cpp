#include "route_forge/clusterer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "route_forge/dbscan.hpp"
#include "route_forge/error.hpp"

namespace route_forge::clusterer {

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

std::array<double, 3> unit_vector(const geo::GeoPoint& p) {
  constexpr double kDegToRad = std::numbers::pi / 180.0;
  const double lat = p.lat * kDegToRad;
  const double lon = p.lon * kDegToRad;
  return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

double chord_sq(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

void recurse(std::span<const geo::GeoPoint> points, const std::vector<std::size_t>& subset,
             const ClusterConfig& config, int max_radius, int depth, ClusterSet& out) {
  if (depth > kMaxRecursionDepth) {
    throw Error(ErrorCode::RecursionLimit,
                "recursion deeper than " + std::to_string(kMaxRecursionDepth));
  }
  if (max_radius < config.min_radius) {
    throw Error(ErrorCode::NoSolutionFound,
                "cluster of " + std::to_string(subset.size()) +
                    " points cannot be split below radius " + std::to_string(config.min_radius));
  }

  std::vector<geo::GeoPoint> sub_points;
  sub_points.reserve(subset.size());
  for (const auto i : subset) sub_points.push_back(points[i]);

  ClusterConfig level = config;
  level.max_radius = max_radius;
  Feasibility feasibility = Feasibility::MaxSizeCap;
  if (depth == 0) {
    feasibility = Feasibility::MinClusterCount;
    if (!level.min_no_clusters) {
      level.min_no_clusters = ceil_div(subset.size(), config.max_cluster_size);
    }
  }

  const auto found = binary_search_clusters(sub_points, level, feasibility);
  for (const auto& local : found.clusters.clusters) {
    std::vector<std::size_t> members;
    members.reserve(local.size());
    for (const auto k : local) members.push_back(subset[k]);
    if (members.size() > config.max_cluster_size) {
      recurse(points, members, config, found.best_radius - 1, depth + 1, out);
    } else {
      out.clusters.push_back(std::move(members));
      out.radius.push_back(found.best_radius);
      out.depth.push_back(depth);
    }
  }
}

}  // namespace

void check_config(const ClusterConfig& config) {
  if (config.min_radius <= 0 || config.max_radius < config.min_radius) {
    throw Error(ErrorCode::InvalidArgument, "radius bounds must satisfy 0 < min <= max");
  }
  if (config.min_cluster_size == 0 || config.max_cluster_size < config.min_cluster_size) {
    throw Error(ErrorCode::InvalidArgument, "cluster sizes must satisfy 0 < min <= max");
  }
  if (config.min_no_clusters && *config.min_no_clusters == 0) {
    throw Error(ErrorCode::InvalidArgument, "min_no_clusters must be positive");
  }
}

std::size_t ClusterSet::peak_size() const noexcept {
  std::size_t peak = 0;
  for (const auto& c : clusters) peak = std::max(peak, c.size());
  return peak;
}

SearchResult binary_search_clusters(std::span<const geo::GeoPoint> points,
                                    const ClusterConfig& config, Feasibility feasibility) {
  check_config(config);
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "no points to cluster");

  const std::size_t min_count =
      config.min_no_clusters.value_or(ceil_div(points.size(), config.max_cluster_size));

  SearchResult result;
  bool found = false;
  double best_avg = 0.0;
  int lo = config.min_radius;
  int hi = config.max_radius;
  while (lo <= hi) {
    const int radius = lo + (hi - lo) / 2;
    const auto labels =
        dbscan::dbscan(points, {geo::meters_to_radians(static_cast<double>(radius)), 1});
    auto groups = labels.groups();

    Probe probe;
    probe.radius = radius;
    probe.cluster_count = groups.size();
    for (const auto& g : groups) probe.largest = std::max(probe.largest, g.size());
    probe.feasible = feasibility == Feasibility::MaxSizeCap
                         ? probe.largest <= config.max_cluster_size
                         : probe.cluster_count >= min_count;
    result.probes.push_back(probe);

    if (!probe.feasible) {
      hi = radius - 1;
      continue;
    }
    lo = radius + 1;
    const double avg = static_cast<double>(points.size()) / static_cast<double>(groups.size());
    if (avg > best_avg) {
      best_avg = avg;
      found = true;
      result.best_radius = radius;
      result.clusters.clusters = std::move(groups);
    }
  }

  if (!found) {
    throw Error(ErrorCode::NoSolutionFound,
                "no radius in [" + std::to_string(config.min_radius) + ", " +
                    std::to_string(config.max_radius) + "] yields a feasible clustering of " +
                    std::to_string(points.size()) + " points");
  }
  const auto count = result.clusters.clusters.size();
  result.clusters.radius.assign(count, result.best_radius);
  result.clusters.depth.assign(count, 0);
  return result;
}

ClusterSet recursive_dbscan(std::span<const geo::GeoPoint> points, const ClusterConfig& config) {
  check_config(config);
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "no points to cluster");
  std::vector<std::size_t> all(points.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  ClusterSet out;
  recurse(points, all, config, config.max_radius, 0, out);
  return merge_small_clusters(std::move(out), points, config);
}

geo::GeoPoint centroid(std::span<const std::size_t> members,
                       std::span<const geo::GeoPoint> points) {
  geo::GeoPoint c{0.0, 0.0};
  if (members.empty()) return c;
  for (const auto i : members) {
    c.lat += points[i].lat;
    c.lon += points[i].lon;
  }
  c.lat /= static_cast<double>(members.size());
  c.lon /= static_cast<double>(members.size());
  return c;
}

ClusterSet merge_small_clusters(ClusterSet set, std::span<const geo::GeoPoint> points,
                                const ClusterConfig& config) {
  const auto count = set.clusters.size();
  std::vector<std::array<double, 3>> centre(count);
  std::vector<std::size_t> lowest(count);
  std::vector<char> alive(count, 1);
  std::vector<char> stuck(count, 0);
  for (std::size_t c = 0; c < count; ++c) {
    centre[c] = unit_vector(centroid(set.clusters[c], points));
    lowest[c] = *std::min_element(set.clusters[c].begin(), set.clusters[c].end());
  }

  while (true) {
    std::size_t pick = count;
    for (std::size_t c = 0; c < count; ++c) {
      if (!alive[c] || stuck[c] || set.clusters[c].size() >= config.min_cluster_size) continue;
      if (pick == count || set.clusters[c].size() < set.clusters[pick].size() ||
          (set.clusters[c].size() == set.clusters[pick].size() && lowest[c] < lowest[pick])) {
        pick = c;
      }
    }
    if (pick == count) break;

    std::size_t target = count;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < count; ++c) {
      if (c == pick || !alive[c]) continue;
      if (set.clusters[c].size() + set.clusters[pick].size() > config.max_cluster_size) continue;
      const double d = chord_sq(centre[pick], centre[c]);
      if (d < best || (d == best && target != count && lowest[c] < lowest[target])) {
        best = d;
        target = c;
      }
    }
    if (target == count) {
      stuck[pick] = 1;
      continue;
    }

    auto& into = set.clusters[target];
    into.insert(into.end(), set.clusters[pick].begin(), set.clusters[pick].end());
    std::sort(into.begin(), into.end());
    set.clusters[pick].clear();
    alive[pick] = 0;
    lowest[target] = std::min(lowest[target], lowest[pick]);
    centre[target] = unit_vector(centroid(into, points));
  }

  ClusterSet out;
  for (std::size_t c = 0; c < count; ++c) {
    if (!alive[c]) continue;
    out.clusters.push_back(std::move(set.clusters[c]));
    out.radius.push_back(set.radius.empty() ? 0 : set.radius[c]);
    out.depth.push_back(set.depth.empty() ? 0 : set.depth[c]);
  }
  return out;
}

std::vector<std::size_t> cluster_order(const ClusterSet& set, std::span<const geo::GeoPoint> points,
                                       const geo::GeoPoint& depot) {
  struct Key {
    std::size_t size;
    double distance;
    std::size_t lowest;
  };
  std::vector<Key> keys;
  keys.reserve(set.clusters.size());
  for (const auto& c : set.clusters) {
    keys.push_back({c.size(), geo::haversine_distance(centroid(c, points), depot),
                    c.empty() ? 0 : *std::min_element(c.begin(), c.end())});
  }
  std::vector<std::size_t> order(set.clusters.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ka = keys[a];
    const auto& kb = keys[b];
    if (ka.size != kb.size) return ka.size > kb.size;
    if (ka.distance != kb.distance) return ka.distance < kb.distance;
    return ka.lowest < kb.lowest;
  });
  return order;
}

}  // namespace route_forge::clusterer
