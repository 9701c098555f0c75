#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "route_forge/clusterer.hpp"
#include "route_forge/model.hpp"
#include "route_forge/solver.hpp"

namespace route_forge::pipeline {

enum class Strategy { Monolithic, Dbscan, RecursiveDbscan };

inline constexpr Strategy kAllStrategies[] = {Strategy::Monolithic, Strategy::Dbscan,
                                              Strategy::RecursiveDbscan};

std::string_view to_string(Strategy s);
/// Accepts "monolithic", "dbscan", "recursive-dbscan" (also "recursive").
std::optional<Strategy> parse_strategy(std::string_view name);

std::vector<geo::GeoPoint> waypoint_positions(const ProblemInstance& instance);

/// Depot + the given waypoints (renumbered 1..k in the given order) + the
/// given vehicles (renumbered 1..m). Windows and demands are unchanged.
ProblemInstance sub_instance(const ProblemInstance& instance, std::span<const int> waypoint_ids,
                             std::span<const int> vehicle_ids);

struct ClusterStep {
  std::size_t cluster = 0;
  std::vector<int> offered;  // free vehicle ids handed to the sub-solve
  std::vector<int> busy;     // ids the sub-solve used
};

/// Solves clusters one at a time in cluster_order, removing each solve's busy
/// vehicles from the shared pool. Cluster members are 0-based waypoint
/// positions. Throws Error(NoSolutionFound) when the pool empties early or a
/// sub-solve cannot serve its cluster.
RoutePlan optimise_clusters(const clusterer::ClusterSet& clusters, const ProblemInstance& instance,
                            const solver::SolverParams& params,
                            std::vector<ClusterStep>* trace = nullptr);

enum class Status { Ok, NoSolution };

struct PipelineResult {
  Status status = Status::Ok;
  RoutePlan plan;
  double wall_time_ms = 0.0;
  Meters total_distance = 0.0;
  std::size_t busy_vehicle_count = 0;
  std::size_t cluster_count = 0;  // 0 for the monolithic strategy
  std::size_t peak_cluster_size = 0;
  std::string failure;
};

/// Runs one strategy end to end; wall time covers clustering and solving.
/// Failures are reported through status, with wall time still measured.
PipelineResult run_strategy(const ProblemInstance& instance, Strategy strategy,
                            const clusterer::ClusterConfig& cluster_config,
                            const solver::SolverParams& params);

}  // namespace route_forge::pipeline
