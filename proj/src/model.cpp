#include "route_forge/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "route_forge/error.hpp"

namespace route_forge {

namespace {

void check_window(const TimeWindow& w, const std::string& what) {
  if (w.earliest < 0 || w.latest < w.earliest) {
    throw Error(ErrorCode::InvalidInstance,
                what + " has invalid window [" + std::to_string(w.earliest) + ", " +
                    std::to_string(w.latest) + "]");
  }
}

}  // namespace

void check_instance(const ProblemInstance& instance) {
  if (!geo::valid(instance.depot.pos)) {
    throw Error(ErrorCode::InvalidInstance, "depot coordinates out of range");
  }
  check_window(instance.depot.pickup_window, "depot");
  if (!(instance.travel.speed_mps > 0.0) || !std::isfinite(instance.travel.speed_mps)) {
    throw Error(ErrorCode::InvalidInstance, "travel speed must be positive");
  }
  if (!instance.travel.open_routes) {
    throw Error(ErrorCode::InvalidInstance, "only open routes are supported");
  }

  int max_capacity = 0;
  for (std::size_t k = 0; k < instance.vehicles.size(); ++k) {
    const auto& v = instance.vehicles[k];
    if (v.id != static_cast<int>(k) + 1) {
      throw Error(ErrorCode::InvalidInstance,
                  "vehicle ids must be 1..M in order, found " + std::to_string(v.id) +
                      " at position " + std::to_string(k));
    }
    if (v.capacity <= 0) {
      throw Error(ErrorCode::InvalidInstance,
                  "vehicle " + std::to_string(v.id) + " has non-positive capacity");
    }
    max_capacity = std::max(max_capacity, v.capacity);
  }

  for (std::size_t i = 0; i < instance.waypoints.size(); ++i) {
    const auto& w = instance.waypoints[i];
    const std::string name = "waypoint " + std::to_string(w.id);
    if (w.id != static_cast<int>(i) + 1) {
      throw Error(ErrorCode::InvalidInstance,
                  "waypoint ids must be 1..N in order, found " + std::to_string(w.id) +
                      " at position " + std::to_string(i));
    }
    if (!geo::valid(w.pos)) throw Error(ErrorCode::InvalidInstance, name + " coordinates out of range");
    if (w.demand < 0) throw Error(ErrorCode::InvalidInstance, name + " has negative demand");
    if (w.demand > max_capacity) {
      throw Error(ErrorCode::InvalidInstance,
                  name + " demand " + std::to_string(w.demand) +
                      " exceeds the largest vehicle capacity " + std::to_string(max_capacity));
    }
    if (w.service_duration < 0) {
      throw Error(ErrorCode::InvalidInstance, name + " has negative service duration");
    }
    check_window(w.window, name);
  }
}

Seconds travel_seconds(Meters distance, const TravelModel& travel) noexcept {
  return static_cast<Seconds>(std::llround(distance / travel.speed_mps));
}

Meters arc_distance(const ProblemInstance& instance, int from, int to) {
  if (to == 0) return 0.0;
  return geo::haversine_distance(instance.position(from), instance.position(to));
}

std::size_t busy_vehicle_count(const RoutePlan& plan) noexcept {
  return static_cast<std::size_t>(std::count_if(
      plan.routes.begin(), plan.routes.end(), [](const Route& r) { return !r.stops.empty(); }));
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Unvisited: return "UNVISITED";
    case ViolationKind::MultiplyVisited: return "MULTIPLY_VISITED";
    case ViolationKind::Capacity: return "CAPACITY";
    case ViolationKind::TimeWindow: return "TIME_WINDOW";
    case ViolationKind::DepotWindow: return "DEPOT_WINDOW";
    case ViolationKind::VehicleReuse: return "VEHICLE_REUSE";
    case ViolationKind::TimingInconsistent: return "TIMING_INCONSISTENT";
    case ViolationKind::UnknownWaypoint: return "UNKNOWN_WAYPOINT";
    case ViolationKind::UnknownVehicle: return "UNKNOWN_VEHICLE";
  }
  return "UNKNOWN";
}

std::string describe(const Violation& v) {
  std::ostringstream out;
  out << to_string(v.kind);
  if (v.vehicle_id != 0) out << " vehicle=" << v.vehicle_id;
  if (v.waypoint_id != 0) out << " waypoint=" << v.waypoint_id;
  out << " amount=" << v.amount << " limit=" << v.limit;
  return out.str();
}

Meters evaluate_objective(const RoutePlan& plan, const ProblemInstance& instance) {
  Meters total = 0.0;
  for (const auto& route : plan.routes) {
    int prev = 0;
    for (const auto& stop : route.stops) {
      if (!instance.has_waypoint(stop.waypoint_id)) {
        throw Error(ErrorCode::UnknownWaypoint,
                    "stop references waypoint " + std::to_string(stop.waypoint_id));
      }
      total += arc_distance(instance, prev, stop.waypoint_id);
      prev = stop.waypoint_id;
    }
  }
  return total;
}

std::vector<Violation> validate_solution(const RoutePlan& plan, const ProblemInstance& instance) {
  std::vector<Violation> out;
  const auto n = instance.waypoints.size();
  std::vector<int> visits(n + 1, 0);
  std::vector<int> vehicle_uses(instance.vehicles.size() + 1, 0);
  const auto& depot_window = instance.depot.pickup_window;

  for (const auto& route : plan.routes) {
    const bool known_vehicle = instance.has_vehicle(route.vehicle_id);
    if (!known_vehicle) {
      out.push_back({ViolationKind::UnknownVehicle, route.vehicle_id, 0, 0, 0});
    } else {
      ++vehicle_uses[static_cast<std::size_t>(route.vehicle_id)];
    }
    if (!depot_window.contains(route.depot_pickup_time)) {
      out.push_back({ViolationKind::DepotWindow, route.vehicle_id, 0, route.depot_pickup_time,
                     route.depot_pickup_time < depot_window.earliest ? depot_window.earliest
                                                                     : depot_window.latest});
    }

    std::int64_t load = 0;
    int prev = 0;
    Seconds prev_departure = route.depot_pickup_time;
    bool chain_ok = true;  // timing is only checkable while every id resolves
    for (const auto& stop : route.stops) {
      if (!instance.has_waypoint(stop.waypoint_id)) {
        out.push_back({ViolationKind::UnknownWaypoint, route.vehicle_id, stop.waypoint_id, 0, 0});
        chain_ok = false;
        continue;
      }
      const auto& wp = instance.waypoint(stop.waypoint_id);
      ++visits[static_cast<std::size_t>(wp.id)];
      load += wp.demand;

      if (chain_ok) {
        const Seconds expected =
            prev_departure + travel_seconds(arc_distance(instance, prev, wp.id), instance.travel);
        if (stop.arrival != expected) {
          out.push_back({ViolationKind::TimingInconsistent, route.vehicle_id, wp.id, stop.arrival,
                         expected});
        }
      }
      const Seconds service_start = std::max(stop.arrival, wp.window.earliest);
      if (service_start > wp.window.latest) {
        out.push_back({ViolationKind::TimeWindow, route.vehicle_id, wp.id, service_start,
                       wp.window.latest});
      }
      prev = wp.id;
      prev_departure = service_start + wp.service_duration;
    }

    if (known_vehicle) {
      const auto capacity = instance.vehicle(route.vehicle_id).capacity;
      if (load > capacity) {
        out.push_back({ViolationKind::Capacity, route.vehicle_id, 0, load, capacity});
      }
    }
  }

  for (std::size_t k = 1; k < vehicle_uses.size(); ++k) {
    if (vehicle_uses[k] > 1) {
      out.push_back({ViolationKind::VehicleReuse, static_cast<int>(k), 0, vehicle_uses[k], 1});
    }
  }
  for (std::size_t i = 1; i <= n; ++i) {
    if (visits[i] == 0) {
      out.push_back({ViolationKind::Unvisited, 0, static_cast<int>(i), 0, 1});
    } else if (visits[i] > 1) {
      out.push_back({ViolationKind::MultiplyVisited, 0, static_cast<int>(i), visits[i], 1});
    }
  }
  return out;
}

Route propagate_schedule(int vehicle_id, std::span<const int> stop_ids,
                         const ProblemInstance& instance) {
  // Waiting absorbs early arrivals, so leaving later can never rescue a
  // sequence that fails when leaving at the window start.
  Route route;
  route.vehicle_id = vehicle_id;
  route.depot_pickup_time = instance.depot.pickup_window.earliest;
  route.stops.reserve(stop_ids.size());

  int prev = 0;
  Seconds clock = route.depot_pickup_time;
  for (const int id : stop_ids) {
    if (!instance.has_waypoint(id)) {
      throw Error(ErrorCode::UnknownWaypoint, "stop references waypoint " + std::to_string(id));
    }
    const auto& wp = instance.waypoint(id);
    const Seconds arrival =
        clock + travel_seconds(arc_distance(instance, prev, id), instance.travel);
    const Seconds start = std::max(arrival, wp.window.earliest);
    if (start > wp.window.latest) {
      throw Error(ErrorCode::InfeasibleSequence,
                  "vehicle " + std::to_string(vehicle_id) + " reaches waypoint " +
                      std::to_string(id) + " at " + std::to_string(arrival) +
                      " after its window closes at " + std::to_string(wp.window.latest));
    }
    clock = start + wp.service_duration;
    route.stops.push_back({id, arrival, clock});
    prev = id;
  }
  return route;
}

Route propagate_schedule(const Route& route, const ProblemInstance& instance) {
  std::vector<int> ids;
  ids.reserve(route.stops.size());
  for (const auto& s : route.stops) ids.push_back(s.waypoint_id);
  return propagate_schedule(route.vehicle_id, ids, instance);
}

}  // namespace route_forge
