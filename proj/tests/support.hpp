#pragma once

// Test-only fixtures and independent oracles. Nothing here calls into the
// library's geometry, clustering or scheduling code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include <json.hpp>

#include "route_forge/model.hpp"

namespace rf_test {

using route_forge::ProblemInstance;
using route_forge::Seconds;
using route_forge::geo::GeoPoint;

inline constexpr double kR = 6'371'008.8;
inline constexpr double kDeg = std::numbers::pi / 180.0;

// Great-circle distance from the vector form: atan2(|a x b|, a . b).
inline double great_circle(const GeoPoint& a, const GeoPoint& b) {
  const double la1 = a.lat * kDeg, lo1 = a.lon * kDeg;
  const double la2 = b.lat * kDeg, lo2 = b.lon * kDeg;
  const double ax = std::cos(la1) * std::cos(lo1), ay = std::cos(la1) * std::sin(lo1),
               az = std::sin(la1);
  const double bx = std::cos(la2) * std::cos(lo2), by = std::cos(la2) * std::sin(lo2),
               bz = std::sin(la2);
  const double cx = ay * bz - az * by, cy = az * bx - ax * bz, cz = ax * by - ay * bx;
  return kR * std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), ax * bx + ay * by + az * bz);
}

// Point `north` and `east` meters away from `origin` (flat offsets, fine
// below a few tens of km).
inline GeoPoint offset(const GeoPoint& origin, double north, double east) {
  return {origin.lat + north / kR / kDeg,
          origin.lon + east / (kR * std::cos(origin.lat * kDeg)) / kDeg};
}

inline std::vector<GeoPoint> random_points(std::mt19937_64& rng, std::size_t n, double box_m,
                                           GeoPoint origin = {22.3, 114.1}) {
  std::uniform_real_distribution<double> u(0.0, box_m);
  std::vector<GeoPoint> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(offset(origin, u(rng), u(rng)));
  return pts;
}

// --- partitions ---------------------------------------------------------

using Partition = std::set<std::vector<std::size_t>>;

inline Partition partition_of(const std::vector<std::vector<std::size_t>>& groups) {
  Partition p;
  for (auto g : groups) {
    std::sort(g.begin(), g.end());
    p.insert(g);
  }
  return p;
}

inline Partition partition_of_labels(const std::vector<int>& labels) {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto l = static_cast<std::size_t>(labels[i]);
    if (groups.size() <= l) groups.resize(l + 1);
    groups[l].push_back(i);
  }
  return partition_of(groups);
}

struct UnionFind {
  std::vector<std::size_t> parent, size;
  explicit UnionFind(std::size_t n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    return true;
  }
};

inline std::vector<std::size_t> brute_region(const std::vector<GeoPoint>& pts, std::size_t c,
                                             double radius_m) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (j == c || great_circle(pts[c], pts[j]) <= radius_m) out.push_back(j);
  }
  return out;
}

inline Partition components(const std::vector<GeoPoint>& pts, double radius_m) {
  UnionFind uf(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (great_circle(pts[i], pts[j]) <= radius_m) uf.unite(i, j);
    }
  }
  std::vector<std::vector<std::size_t>> groups(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) groups[uf.find(i)].push_back(i);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return partition_of(groups);
}

// Cluster count and largest cluster for every integer radius in [1, max_r],
// from one pass over the sorted pair distances.
struct SweepRow {
  std::size_t count = 0;
  std::size_t largest = 0;
};

inline std::vector<SweepRow> radius_sweep(const std::vector<GeoPoint>& pts, int max_r) {
  std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      edges.emplace_back(great_circle(pts[i], pts[j]), i, j);
    }
  }
  std::sort(edges.begin(), edges.end());
  UnionFind uf(pts.size());
  std::size_t count = pts.size();
  std::size_t largest = pts.empty() ? 0 : 1;
  std::vector<SweepRow> rows(static_cast<std::size_t>(max_r) + 1);
  std::size_t e = 0;
  for (int r = 1; r <= max_r; ++r) {
    while (e < edges.size() && std::get<0>(edges[e]) <= r) {
      const auto [d, i, j] = edges[e++];
      if (uf.unite(i, j)) {
        --count;
        largest = std::max(largest, uf.size[uf.find(i)]);
      }
    }
    rows[static_cast<std::size_t>(r)] = {count, largest};
  }
  return rows;
}

// --- instances ----------------------------------------------------------

inline ProblemInstance make_instance(const GeoPoint& depot, const std::vector<GeoPoint>& pts,
                                     std::vector<int> capacities, Seconds horizon = 100'000) {
  ProblemInstance inst;
  inst.depot.pos = depot;
  inst.depot.pickup_window = {0, horizon};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    inst.waypoints.push_back({static_cast<int>(i) + 1, pts[i], 1, {0, horizon}, 0});
  }
  for (std::size_t k = 0; k < capacities.size(); ++k) {
    inst.vehicles.push_back({static_cast<int>(k) + 1, capacities[k]});
  }
  return inst;
}

// Step-by-step schedule: leave the depot at the window start, wait for each
// window, fail if service would start late. Returns arrival times.
inline std::optional<std::vector<Seconds>> simulate(const ProblemInstance& inst,
                                                    const std::vector<int>& ids) {
  Seconds clock = inst.depot.pickup_window.earliest;
  GeoPoint at = inst.depot.pos;
  std::vector<Seconds> arrivals;
  for (const int id : ids) {
    const auto& w = inst.waypoints[static_cast<std::size_t>(id - 1)];
    const double meters = great_circle(at, w.pos);
    const Seconds arrive = clock + static_cast<Seconds>(std::llround(meters / inst.travel.speed_mps));
    const Seconds start = std::max(arrive, w.window.earliest);
    if (start > w.window.latest) return std::nullopt;
    arrivals.push_back(arrive);
    clock = start + w.service_duration;
    at = w.pos;
  }
  return arrivals;
}

inline double path_length(const ProblemInstance& inst, const std::vector<int>& ids) {
  double total = 0.0;
  GeoPoint at = inst.depot.pos;
  for (const int id : ids) {
    const auto& p = inst.waypoints[static_cast<std::size_t>(id - 1)].pos;
    total += great_circle(at, p);
    at = p;
  }
  return total;
}

// Shortest feasible open path over exactly `ids`, by enumeration.
inline std::optional<double> best_path(const ProblemInstance& inst, std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  std::optional<double> best;
  do {
    if (!simulate(inst, ids)) continue;
    const double len = path_length(inst, ids);
    if (!best || len < *best) best = len;
  } while (std::next_permutation(ids.begin(), ids.end()));
  return best;
}

// Exact optimum for tiny instances: best feasible path per subset, then a DP
// that partitions the waypoints over at most M routes. Vehicles are sorted by
// capacity so larger vehicles can take heavier subsets.
inline std::optional<double> exact_cvrptw(const ProblemInstance& inst) {
  const auto n = inst.waypoints.size();
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<std::optional<double>> subset_cost(full + 1);
  std::vector<int> subset_demand(full + 1, 0);
  for (std::size_t mask = 1; mask <= full; ++mask) {
    std::vector<int> ids;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        ids.push_back(static_cast<int>(i) + 1);
        subset_demand[mask] += inst.waypoints[i].demand;
      }
    }
    subset_cost[mask] = best_path(inst, ids);
  }
  std::vector<int> caps;
  for (const auto& v : inst.vehicles) caps.push_back(v.capacity);
  std::sort(caps.rbegin(), caps.rend());
  // dp[mask] after k vehicles.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(full + 1, kInf);
  dp[0] = 0.0;
  for (const int cap : caps) {
    auto next = dp;
    for (std::size_t mask = 0; mask <= full; ++mask) {
      if (dp[mask] == kInf) continue;
      const std::size_t rest = full & ~mask;
      for (std::size_t sub = rest; sub; sub = (sub - 1) & rest) {
        if (!subset_cost[sub] || subset_demand[sub] > cap) continue;
        next[mask | sub] = std::min(next[mask | sub], dp[mask] + *subset_cost[sub]);
      }
    }
    dp = std::move(next);
  }
  if (dp[full] == kInf) return std::nullopt;
  return dp[full];
}

// Structural GeoJSON check (RFC 7946 subset used here). Returns "" when valid.
inline std::string geojson_problem(const nlohmann::json& j) {
  auto position_ok = [](const nlohmann::json& p) {
    return p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number() &&
           std::abs(p[0].get<double>()) <= 180.0 && std::abs(p[1].get<double>()) <= 90.0;
  };
  if (!j.is_object() || j.value("type", "") != "FeatureCollection") return "not a FeatureCollection";
  if (!j.contains("features") || !j["features"].is_array()) return "features missing";
  for (const auto& f : j["features"]) {
    if (!f.is_object() || f.value("type", "") != "Feature") return "feature without type Feature";
    if (!f.contains("properties") || !(f["properties"].is_object() || f["properties"].is_null())) {
      return "feature properties missing";
    }
    if (!f.contains("geometry") || !f["geometry"].is_object()) return "geometry missing";
    const auto& g = f["geometry"];
    const auto type = g.value("type", "");
    if (!g.contains("coordinates")) return "coordinates missing";
    const auto& c = g["coordinates"];
    if (type == "Point") {
      if (!position_ok(c)) return "bad Point position";
    } else if (type == "LineString") {
      if (!c.is_array() || c.size() < 2) return "LineString needs two positions";
      for (const auto& p : c) {
        if (!position_ok(p)) return "bad LineString position";
      }
    } else {
      return "unexpected geometry " + type;
    }
  }
  return "";
}

}  // namespace rf_test
