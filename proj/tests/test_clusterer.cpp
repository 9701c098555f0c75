#include <gtest/gtest.h>

#include <random>

#include "route_forge/clusterer.hpp"
#include "route_forge/dbscan.hpp"
#include "route_forge/error.hpp"
#include "route_forge/generator.hpp"
#include "route_forge/pipeline.hpp"
#include "support.hpp"

using namespace route_forge;
using clusterer::ClusterConfig;
using clusterer::ClusterSet;
using clusterer::Feasibility;
using rf_test::offset;

namespace {

const geo::GeoPoint kOrigin{22.3, 114.1};

std::vector<geo::GeoPoint> blob(std::mt19937_64& rng, geo::GeoPoint centre, std::size_t n,
                                double sd_m) {
  std::normal_distribution<double> g(0.0, sd_m);
  std::vector<geo::GeoPoint> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(offset(centre, g(rng), g(rng)));
  return pts;
}

void expect_partition(const ClusterSet& set, std::size_t n) {
  std::vector<int> seen(n, 0);
  for (const auto& c : set.clusters) {
    EXPECT_FALSE(c.empty());
    for (const auto i : c) {
      ASSERT_LT(i, n);
      ++seen[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(seen[i], 1) << "point " << i;
  EXPECT_EQ(set.radius.size(), set.size());
  EXPECT_EQ(set.depth.size(), set.size());
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

// Hand-driven recursion: top level by cluster count, oversized clusters split
// below the parent's radius under the size cap, then the merge pass.
void drive(std::span<const geo::GeoPoint> points, const std::vector<std::size_t>& subset,
           const ClusterConfig& config, int max_radius, bool top, ClusterSet& out) {
  std::vector<geo::GeoPoint> sub;
  for (const auto i : subset) sub.push_back(points[i]);
  ClusterConfig level = config;
  level.max_radius = max_radius;
  if (top && !level.min_no_clusters) {
    level.min_no_clusters = (subset.size() + config.max_cluster_size - 1) / config.max_cluster_size;
  }
  const auto r = clusterer::binary_search_clusters(
      sub, level, top ? Feasibility::MinClusterCount : Feasibility::MaxSizeCap);
  for (const auto& local : r.clusters.clusters) {
    std::vector<std::size_t> members;
    for (const auto k : local) members.push_back(subset[k]);
    if (members.size() > config.max_cluster_size) {
      drive(points, members, config, r.best_radius - 1, false, out);
    } else {
      out.clusters.push_back(members);
      out.radius.push_back(r.best_radius);
      out.depth.push_back(0);
    }
  }
}

}  // namespace

TEST(Clusterer, ConfigValidation) {
  ClusterConfig c;
  EXPECT_NO_THROW(clusterer::check_config(c));
  c.min_radius = 0;
  EXPECT_EQ(code_of([&] { clusterer::check_config(c); }), ErrorCode::InvalidArgument);
  c = {};
  c.min_cluster_size = 600;
  EXPECT_EQ(code_of([&] { clusterer::check_config(c); }), ErrorCode::InvalidArgument);
}

TEST(Clusterer, CoincidentPointsHaveNoSolution) {
  const std::vector<geo::GeoPoint> pts(600, kOrigin);
  EXPECT_EQ(code_of([&] {
              clusterer::binary_search_clusters(pts, ClusterConfig{}, Feasibility::MaxSizeCap);
            }),
            ErrorCode::NoSolutionFound);
}

TEST(Clusterer, SingleBlobIsOneCluster) {
  std::mt19937_64 rng(1);
  const auto pts = rf_test::random_points(rng, 100, 50);
  const auto r = clusterer::binary_search_clusters(pts, ClusterConfig{}, Feasibility::MaxSizeCap);
  ASSERT_EQ(r.clusters.size(), 1u);
  EXPECT_EQ(r.clusters.clusters[0].size(), 100u);
  const auto sweep = rf_test::radius_sweep(pts, 10'000);
  EXPECT_EQ(sweep[static_cast<std::size_t>(r.best_radius)].count, 1u);
}

TEST(Clusterer, TwoBlobsFiveKmApart) {
  std::mt19937_64 rng(2);
  auto pts = blob(rng, kOrigin, 300, 150);
  const auto far = blob(rng, offset(kOrigin, 0, 5000), 300, 150);
  pts.insert(pts.end(), far.begin(), far.end());
  const auto r = clusterer::binary_search_clusters(pts, ClusterConfig{}, Feasibility::MaxSizeCap);
  ASSERT_EQ(r.clusters.size(), 2u);
  EXPECT_EQ(r.clusters.clusters[0].size(), 300u);
  EXPECT_EQ(r.clusters.clusters[1].size(), 300u);
  EXPECT_LT(r.best_radius, 5000);
  const auto sweep = rf_test::radius_sweep(pts, 10'000);
  EXPECT_EQ(sweep[static_cast<std::size_t>(r.best_radius)].count, 2u);
}

TEST(Clusterer, ProbesAgreeWithExhaustiveSweep) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 8; ++trial) {
    bench::GeneratorConfig g;
    g.n_waypoints = 150 + 20 * static_cast<std::size_t>(trial);
    g.seed = 100 + static_cast<std::uint64_t>(trial);
    const auto pts = pipeline::waypoint_positions(bench::generate_instance(g));
    const auto sweep = rf_test::radius_sweep(pts, 10'000);

    // Monotone feasibility: the largest cluster never shrinks as r grows.
    for (std::size_t r = 2; r < sweep.size(); ++r) EXPECT_GE(sweep[r].largest, sweep[r - 1].largest);

    ClusterConfig c;
    c.max_cluster_size = std::max<std::size_t>(pts.size() / 4, 35);
    for (const auto mode : {Feasibility::MaxSizeCap, Feasibility::MinClusterCount}) {
      const auto r = clusterer::binary_search_clusters(pts, c, mode);
      for (const auto& p : r.probes) {
        const auto& row = sweep[static_cast<std::size_t>(p.radius)];
        EXPECT_EQ(p.cluster_count, row.count) << "radius " << p.radius;
        EXPECT_EQ(p.largest, row.largest) << "radius " << p.radius;
      }
      expect_partition(r.clusters, pts.size());
      if (mode == Feasibility::MaxSizeCap) {
        EXPECT_LE(r.clusters.peak_size(), c.max_cluster_size);
      }
    }
  }
}

TEST(Clusterer, BinarySearchProbesFollowIntegerBisection) {
  std::mt19937_64 rng(4);
  const auto pts = rf_test::random_points(rng, 80, 8000);
  ClusterConfig c;
  c.max_cluster_size = 20;
  c.min_cluster_size = 5;
  const auto r = clusterer::binary_search_clusters(pts, c, Feasibility::MaxSizeCap);
  int lo = c.min_radius, hi = c.max_radius;
  for (const auto& p : r.probes) {
    ASSERT_LE(lo, hi);
    EXPECT_EQ(p.radius, lo + (hi - lo) / 2);
    if (p.feasible) lo = p.radius + 1; else hi = p.radius - 1;
  }
  EXPECT_GT(lo, hi);
}

TEST(Clusterer, RecursiveNoRecursionWhenCapSlack) {
  std::mt19937_64 rng(5);
  const auto pts = rf_test::random_points(rng, 200, 6000);
  ClusterConfig c;
  c.min_no_clusters = 1;
  c.min_cluster_size = 1;
  const auto set = clusterer::recursive_dbscan(pts, c);
  const auto top = clusterer::binary_search_clusters(pts, c, Feasibility::MinClusterCount);
  EXPECT_EQ(rf_test::partition_of(set.clusters), rf_test::partition_of(top.clusters.clusters));
  for (const int d : set.depth) EXPECT_EQ(d, 0);
}

TEST(Clusterer, RecursiveSplitsLongChain) {
  std::vector<geo::GeoPoint> pts;
  for (int i = 0; i < 1200; ++i) pts.push_back(offset(kOrigin, 0, 10.0 * i));
  const ClusterConfig c;
  const auto set = clusterer::recursive_dbscan(pts, c);
  expect_partition(set, pts.size());
  EXPECT_LE(set.peak_size(), 500u);

  ClusterSet hand;
  std::vector<std::size_t> all(pts.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  drive(pts, all, c, c.max_radius, true, hand);
  hand = clusterer::merge_small_clusters(hand, pts, c);
  EXPECT_EQ(rf_test::partition_of(set.clusters), rf_test::partition_of(hand.clusters));
}

TEST(Clusterer, RecursiveMatchesHandDrivenOnGeneratedData) {
  for (const std::size_t n : {900u, 1600u}) {
    bench::GeneratorConfig g;
    g.n_waypoints = n;
    g.seed = n;
    const auto pts = pipeline::waypoint_positions(bench::generate_instance(g));
    ClusterConfig c;
    c.max_cluster_size = 200;
    const auto set = clusterer::recursive_dbscan(pts, c);
    expect_partition(set, pts.size());
    EXPECT_LE(set.peak_size(), 200u);
    ClusterSet hand;
    std::vector<std::size_t> all(pts.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    drive(pts, all, c, c.max_radius, true, hand);
    hand = clusterer::merge_small_clusters(hand, pts, c);
    EXPECT_EQ(rf_test::partition_of(set.clusters), rf_test::partition_of(hand.clusters));
    EXPECT_EQ(set, clusterer::recursive_dbscan(pts, c));  // deterministic
  }
}

TEST(Clusterer, InseparableClusterIsNoSolution) {
  const std::vector<geo::GeoPoint> pts(600, kOrigin);
  EXPECT_EQ(code_of([&] { clusterer::recursive_dbscan(pts, ClusterConfig{}); }),
            ErrorCode::NoSolutionFound);
}

TEST(Clusterer, MergeSmallClusters) {
  // Sizes 10, 100, 40 along a line; the 10 sits next to the 40.
  std::vector<geo::GeoPoint> pts;
  ClusterSet set;
  auto add = [&](std::size_t count, double east) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < count; ++i) {
      members.push_back(pts.size());
      pts.push_back(offset(kOrigin, static_cast<double>(i), east));
    }
    set.clusters.push_back(members);
    set.radius.push_back(5);
    set.depth.push_back(0);
  };
  add(10, 10'000);
  add(100, 0);
  add(40, 9'000);
  ClusterConfig c;
  const auto merged = clusterer::merge_small_clusters(set, pts, c);
  ASSERT_EQ(merged.size(), 2u);
  EXPECT_EQ(merged.clusters[0].size(), 100u);
  EXPECT_EQ(merged.clusters[1].size(), 50u);

  // With a cap of 45 the 10 fits nowhere and stays as it is.
  c.max_cluster_size = 45;
  const auto capped = clusterer::merge_small_clusters(set, pts, c);
  EXPECT_EQ(rf_test::partition_of(capped.clusters), rf_test::partition_of(set.clusters));
}

TEST(Clusterer, MergeRespectsCap) {
  std::vector<geo::GeoPoint> pts;
  ClusterSet set;
  for (int c = 0; c < 3; ++c) {
    std::vector<std::size_t> members;
    for (int i = 0; i < 30; ++i) {
      members.push_back(pts.size());
      pts.push_back(offset(kOrigin, i, 1000.0 * c));
    }
    set.clusters.push_back(members);
  }
  ClusterConfig c;
  c.max_cluster_size = 50;
  c.min_cluster_size = 35;
  const auto merged = clusterer::merge_small_clusters(set, pts, c);
  expect_partition(merged, pts.size());
  EXPECT_LE(merged.peak_size(), 50u);
  EXPECT_EQ(merged.size(), 3u);  // no pair fits under the cap
}

TEST(Clusterer, OrderRules) {
  std::vector<geo::GeoPoint> pts;
  ClusterSet set;
  auto add = [&](std::size_t count, double east) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < count; ++i) {
      members.push_back(pts.size());
      pts.push_back(offset(kOrigin, 0, east));
    }
    set.clusters.push_back(members);
  };
  add(120, 100);
  add(480, 9000);
  add(480, 3000);
  EXPECT_EQ(clusterer::cluster_order(set, pts, kOrigin), (std::vector<std::size_t>{2, 1, 0}));

  ClusterSet single;
  single.clusters.push_back({0});
  EXPECT_EQ(clusterer::cluster_order(single, pts, kOrigin), (std::vector<std::size_t>{0}));

  // Same size at the same spot: lowest member first.
  std::vector<geo::GeoPoint> dup(4, offset(kOrigin, 0, 500));
  ClusterSet tie;
  tie.clusters = {{3, 2}, {1, 0}};
  EXPECT_EQ(clusterer::cluster_order(tie, dup, kOrigin), (std::vector<std::size_t>{1, 0}));
}
