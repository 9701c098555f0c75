#include "route_forge/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "route_forge/error.hpp"

namespace route_forge::pipeline {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Monolithic: return "monolithic";
    case Strategy::Dbscan: return "dbscan";
    case Strategy::RecursiveDbscan: return "recursive-dbscan";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  if (name == "monolithic") return Strategy::Monolithic;
  if (name == "dbscan") return Strategy::Dbscan;
  if (name == "recursive-dbscan" || name == "recursive") return Strategy::RecursiveDbscan;
  return std::nullopt;
}

std::vector<geo::GeoPoint> waypoint_positions(const ProblemInstance& instance) {
  std::vector<geo::GeoPoint> out;
  out.reserve(instance.waypoints.size());
  for (const auto& w : instance.waypoints) out.push_back(w.pos);
  return out;
}

ProblemInstance sub_instance(const ProblemInstance& instance, std::span<const int> waypoint_ids,
                             std::span<const int> vehicle_ids) {
  ProblemInstance sub;
  sub.depot = instance.depot;
  sub.travel = instance.travel;
  sub.waypoints.reserve(waypoint_ids.size());
  for (const int id : waypoint_ids) {
    auto w = instance.waypoint(id);
    w.id = static_cast<int>(sub.waypoints.size()) + 1;
    sub.waypoints.push_back(w);
  }
  sub.vehicles.reserve(vehicle_ids.size());
  for (const int id : vehicle_ids) {
    auto v = instance.vehicle(id);
    v.id = static_cast<int>(sub.vehicles.size()) + 1;
    sub.vehicles.push_back(v);
  }
  return sub;
}

RoutePlan optimise_clusters(const clusterer::ClusterSet& clusters, const ProblemInstance& instance,
                            const solver::SolverParams& params, std::vector<ClusterStep>* trace) {
  const auto points = waypoint_positions(instance);
  const auto order = clusterer::cluster_order(clusters, points, instance.depot.pos);

  std::vector<int> pool;
  pool.reserve(instance.vehicles.size());
  for (const auto& v : instance.vehicles) pool.push_back(v.id);

  RoutePlan plan;
  for (const auto c : order) {
    if (pool.empty()) {
      throw Error(ErrorCode::NoSolutionFound,
                  "vehicle pool exhausted before cluster " + std::to_string(c));
    }
    std::vector<int> ids;
    ids.reserve(clusters.clusters[c].size());
    for (const auto i : clusters.clusters[c]) ids.push_back(static_cast<int>(i) + 1);

    const auto sub = sub_instance(instance, ids, pool);
    solver::SolveResult solved;
    try {
      solved = solver::solve_cvrptw(sub, params);
    } catch (const solver::UnassignedError& e) {
      throw Error(ErrorCode::NoSolutionFound,
                  "cluster " + std::to_string(c) + " of " + std::to_string(ids.size()) +
                      " waypoints: " + e.what());
    }

    ClusterStep step{c, pool, {}};
    for (auto route : solved.plan.routes) {
      route.vehicle_id = pool[static_cast<std::size_t>(route.vehicle_id - 1)];
      for (auto& stop : route.stops) {
        stop.waypoint_id = ids[static_cast<std::size_t>(stop.waypoint_id - 1)];
      }
      step.busy.push_back(route.vehicle_id);
      plan.routes.push_back(std::move(route));
    }
    std::sort(step.busy.begin(), step.busy.end());
    std::erase_if(pool, [&](int v) { return std::binary_search(step.busy.begin(), step.busy.end(), v); });
    if (trace) trace->push_back(std::move(step));
  }
  return plan;
}

PipelineResult run_strategy(const ProblemInstance& instance, Strategy strategy,
                            const clusterer::ClusterConfig& cluster_config,
                            const solver::SolverParams& params) {
  using Clock = std::chrono::steady_clock;
  PipelineResult result;
  const auto start = Clock::now();
  try {
    switch (strategy) {
      case Strategy::Monolithic: {
        result.plan = solver::solve_cvrptw(instance, params).plan;
        result.peak_cluster_size = instance.waypoints.size();
        break;
      }
      case Strategy::Dbscan:
      case Strategy::RecursiveDbscan: {
        if (instance.waypoints.empty()) break;
        const auto points = waypoint_positions(instance);
        const auto clusters =
            strategy == Strategy::Dbscan
                ? clusterer::binary_search_clusters(points, cluster_config,
                                                    clusterer::Feasibility::MaxSizeCap)
                      .clusters
                : clusterer::recursive_dbscan(points, cluster_config);
        result.cluster_count = clusters.size();
        result.peak_cluster_size = clusters.peak_size();
        result.plan = optimise_clusters(clusters, instance, params);
        break;
      }
    }
  } catch (const solver::UnassignedError& e) {
    result.status = Status::NoSolution;
    result.failure = e.what();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoSolutionFound && e.code() != ErrorCode::RecursionLimit) throw;
    result.status = Status::NoSolution;
    result.failure = e.what();
  }
  result.wall_time_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  if (result.status != Status::Ok) {
    result.plan = {};
    return result;
  }
  const auto violations = validate_solution(result.plan, instance);
  if (!violations.empty()) {
    throw std::logic_error(std::string(to_string(strategy)) +
                           " produced an infeasible plan: " + describe(violations.front()));
  }
  result.total_distance = evaluate_objective(result.plan, instance);
  result.busy_vehicle_count = busy_vehicle_count(result.plan);
  return result;
}

}  // namespace route_forge::pipeline
