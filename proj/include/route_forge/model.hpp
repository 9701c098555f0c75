#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "route_forge/geo.hpp"

namespace route_forge {

using Seconds = std::int64_t;
using Meters = double;

struct TimeWindow {
  Seconds earliest = 0;
  Seconds latest = 0;

  bool contains(Seconds t) const noexcept { return earliest <= t && t <= latest; }
  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

struct Waypoint {
  int id = 0;
  geo::GeoPoint pos;
  int demand = 0;
  TimeWindow window;
  Seconds service_duration = 0;

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct Depot {
  geo::GeoPoint pos;
  TimeWindow pickup_window;

  friend bool operator==(const Depot&, const Depot&) = default;
};

struct Vehicle {
  int id = 0;
  int capacity = 0;

  friend bool operator==(const Vehicle&, const Vehicle&) = default;
};

// Travel to the depot is free in both time and distance: routes are open
// and end at their last delivery.
struct TravelModel {
  double speed_mps = 10.0;
  bool open_routes = true;

  friend bool operator==(const TravelModel&, const TravelModel&) = default;
};

/// Node 0 is the depot; waypoints[i].id == i + 1 and vehicles[k].id == k + 1
/// once check_instance() has accepted the instance.
struct ProblemInstance {
  Depot depot;
  std::vector<Waypoint> waypoints;
  std::vector<Vehicle> vehicles;
  TravelModel travel;

  bool has_waypoint(int id) const noexcept {
    return id >= 1 && static_cast<std::size_t>(id) <= waypoints.size();
  }
  const Waypoint& waypoint(int id) const { return waypoints[static_cast<std::size_t>(id - 1)]; }
  bool has_vehicle(int id) const noexcept {
    return id >= 1 && static_cast<std::size_t>(id) <= vehicles.size();
  }
  const Vehicle& vehicle(int id) const { return vehicles[static_cast<std::size_t>(id - 1)]; }

  /// Position of node `id`, where 0 is the depot.
  const geo::GeoPoint& position(int id) const {
    return id == 0 ? depot.pos : waypoint(id).pos;
  }

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

/// Throws Error(InvalidInstance) describing the first broken invariant.
void check_instance(const ProblemInstance& instance);

Seconds travel_seconds(Meters distance, const TravelModel& travel) noexcept;

/// Distance of the arc from node `from` to node `to` (0 = depot). Arcs into
/// the depot cost nothing.
Meters arc_distance(const ProblemInstance& instance, int from, int to);

struct StopVisit {
  int waypoint_id = 0;
  Seconds arrival = 0;
  Seconds departure = 0;  // max(arrival, earliest) + service_duration

  friend bool operator==(const StopVisit&, const StopVisit&) = default;
};

struct Route {
  int vehicle_id = 0;
  Seconds depot_pickup_time = 0;
  std::vector<StopVisit> stops;

  friend bool operator==(const Route&, const Route&) = default;
};

struct RoutePlan {
  std::vector<Route> routes;

  friend bool operator==(const RoutePlan&, const RoutePlan&) = default;
};

std::size_t busy_vehicle_count(const RoutePlan& plan) noexcept;

enum class ViolationKind {
  Unvisited,
  MultiplyVisited,
  Capacity,
  TimeWindow,
  DepotWindow,
  VehicleReuse,
  TimingInconsistent,
  UnknownWaypoint,
  UnknownVehicle,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int vehicle_id = 0;   // 0 when not tied to a vehicle
  int waypoint_id = 0;  // 0 when not tied to a waypoint
  std::int64_t amount = 0;  // observed value (load, time, visit count)
  std::int64_t limit = 0;   // bound that was broken

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string describe(const Violation& v);

/// Total driven distance: depot to first stop plus consecutive arcs, no
/// return leg. Throws Error(UnknownWaypoint).
Meters evaluate_objective(const RoutePlan& plan, const ProblemInstance& instance);

/// Empty iff the plan is a feasible solution of the instance.
std::vector<Violation> validate_solution(const RoutePlan& plan, const ProblemInstance& instance);

/// Fills arrival and departure times for a fixed stop sequence, leaving the
/// depot at the start of its pickup window. Waiting before a window opens is
/// allowed. Throws Error(InfeasibleSequence) if any service would start after
/// its window closes, Error(UnknownWaypoint) for bad ids.
Route propagate_schedule(int vehicle_id, std::span<const int> stop_ids,
                         const ProblemInstance& instance);
Route propagate_schedule(const Route& route, const ProblemInstance& instance);

}  // namespace route_forge
