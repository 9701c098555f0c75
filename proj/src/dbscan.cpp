#include "route_forge/dbscan.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "route_forge/error.hpp"

namespace route_forge::dbscan {

namespace {

constexpr int kUnvisited = -2;
// Frontier chunk handed to the batched region query; bounds the memory held
// by neighbor lists when epsilon covers most of the point set.
constexpr std::size_t kBatch = 256;

}  // namespace

std::vector<std::vector<std::size_t>> ClusterLabels::groups() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(cluster_count));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 0) out[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  return out;
}

std::vector<std::size_t> region_query(std::span<const geo::GeoPoint> points,
                                      std::size_t center, double epsilon) {
  if (center >= points.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "center " + std::to_string(center) + " of " + std::to_string(points.size()));
  }
  kernels::NeighborIndex index(points, geo::radians_to_meters(epsilon));
  std::vector<std::size_t> out;
  index.query(center, out);
  return out;
}

namespace {

void check_params(std::span<const geo::GeoPoint> points, const DbscanParams& params) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "dbscan needs at least one point");
  if (!(params.epsilon > 0.0) || !std::isfinite(params.epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be positive and finite");
  }
  if (params.min_samples < 1) throw Error(ErrorCode::InvalidArgument, "min_samples must be >= 1");
}

}  // namespace

ClusterLabels dbscan(std::span<const geo::GeoPoint> points, const DbscanParams& params,
                     kernels::Execution exec) {
  check_params(points, params);
  if (params.min_samples > 1) return expand_clusters(points, params, exec);
  const kernels::NeighborIndex index(points, geo::radians_to_meters(params.epsilon));
  ClusterLabels result;
  result.cluster_count = index.components(result.labels);
  return result;
}

ClusterLabels expand_clusters(std::span<const geo::GeoPoint> points, const DbscanParams& params,
                              kernels::Execution exec) {
  check_params(points, params);
  const kernels::NeighborIndex index(points, geo::radians_to_meters(params.epsilon));
  ClusterLabels result;
  result.labels.assign(points.size(), kUnvisited);
  auto& labels = result.labels;

  std::vector<std::size_t> seed_nbrs;
  std::vector<std::size_t> frontier;
  std::vector<std::size_t> next;
  std::vector<std::vector<std::size_t>> nbrs;

  for (std::size_t seed = 0; seed < points.size(); ++seed) {
    if (labels[seed] != kUnvisited) continue;
    seed_nbrs.clear();
    index.query(seed, seed_nbrs);
    if (seed_nbrs.size() < params.min_samples) {
      labels[seed] = kNoise;
      continue;
    }
    const int cluster = result.cluster_count++;
    labels[seed] = cluster;

    // Level-synchronous expansion: the set of points reached is independent of
    // the order inside a level, so the batched queries may run in parallel.
    frontier.clear();
    for (const auto j : seed_nbrs) {
      if (labels[j] == kNoise) {
        labels[j] = cluster;
      } else if (labels[j] == kUnvisited) {
        labels[j] = cluster;
        frontier.push_back(j);
      }
    }
    while (!frontier.empty()) {
      next.clear();
      for (std::size_t off = 0; off < frontier.size(); off += kBatch) {
        const auto len = std::min(kBatch, frontier.size() - off);
        const std::span<const std::size_t> chunk(frontier.data() + off, len);
        kernels::batch_region_query(index, chunk, nbrs, exec);
        for (std::size_t k = 0; k < len; ++k) {
          if (nbrs[k].size() < params.min_samples) continue;  // border point
          for (const auto j : nbrs[k]) {
            if (labels[j] == kNoise) {
              labels[j] = cluster;
            } else if (labels[j] == kUnvisited) {
              labels[j] = cluster;
              next.push_back(j);
            }
          }
        }
      }
      frontier.swap(next);
    }
  }
  return result;
}

}  // namespace route_forge::dbscan
