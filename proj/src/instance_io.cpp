#include "route_forge/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "route_forge/error.hpp"

namespace route_forge::io {

namespace {

Json window_json(const TimeWindow& w) { return Json::array({w.earliest, w.latest}); }

TimeWindow window_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::Parse, "window must be [earliest, latest]");
  return {j.at(0).get<Seconds>(), j.at(1).get<Seconds>()};
}

template <typename F>
auto parse_guard(const char* what, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json instance_to_json(const ProblemInstance& instance) {
  Json j;
  j["depot"] = {{"lat", instance.depot.pos.lat},
                {"lon", instance.depot.pos.lon},
                {"window", window_json(instance.depot.pickup_window)}};
  Json wps = Json::array();
  for (const auto& w : instance.waypoints) {
    Json o = {{"id", w.id},
              {"lat", w.pos.lat},
              {"lon", w.pos.lon},
              {"demand", w.demand},
              {"window", window_json(w.window)}};
    if (w.service_duration != 0) o["service"] = w.service_duration;
    wps.push_back(std::move(o));
  }
  j["waypoints"] = std::move(wps);
  Json vs = Json::array();
  for (const auto& v : instance.vehicles) vs.push_back({{"id", v.id}, {"capacity", v.capacity}});
  j["vehicles"] = std::move(vs);
  j["travel"] = {{"speed_mps", instance.travel.speed_mps}};
  return j;
}

ProblemInstance instance_from_json(const Json& j) {
  ProblemInstance inst = parse_guard("instance", [&] {
    ProblemInstance out;
    const auto& depot = j.at("depot");
    out.depot.pos = {depot.at("lat").get<double>(), depot.at("lon").get<double>()};
    out.depot.pickup_window = window_from(depot.at("window"));
    for (const auto& w : j.at("waypoints")) {
      Waypoint wp;
      wp.id = w.at("id").get<int>();
      wp.pos = {w.at("lat").get<double>(), w.at("lon").get<double>()};
      wp.demand = w.at("demand").get<int>();
      wp.window = window_from(w.at("window"));
      wp.service_duration = w.value("service", Seconds{0});
      out.waypoints.push_back(wp);
    }
    for (const auto& v : j.at("vehicles")) {
      out.vehicles.push_back({v.at("id").get<int>(), v.at("capacity").get<int>()});
    }
    if (j.contains("travel")) out.travel.speed_mps = j.at("travel").at("speed_mps").get<double>();
    return out;
  });
  std::sort(inst.waypoints.begin(), inst.waypoints.end(),
            [](const Waypoint& a, const Waypoint& b) { return a.id < b.id; });
  std::sort(inst.vehicles.begin(), inst.vehicles.end(),
            [](const Vehicle& a, const Vehicle& b) { return a.id < b.id; });
  check_instance(inst);
  return inst;
}

Json plan_to_json(const RoutePlan& plan) {
  Json routes = Json::array();
  for (const auto& r : plan.routes) {
    Json stops = Json::array();
    for (const auto& s : r.stops) stops.push_back({{"id", s.waypoint_id}, {"arrival", s.arrival}});
    routes.push_back({{"vehicle", r.vehicle_id},
                      {"pickup_time", r.depot_pickup_time},
                      {"stops", std::move(stops)}});
  }
  return {{"routes", std::move(routes)}};
}

RoutePlan plan_from_json(const Json& j, const ProblemInstance* instance) {
  return parse_guard("plan", [&] {
    RoutePlan plan;
    for (const auto& r : j.at("routes")) {
      Route route;
      route.vehicle_id = r.at("vehicle").get<int>();
      route.depot_pickup_time = r.at("pickup_time").get<Seconds>();
      for (const auto& s : r.at("stops")) {
        StopVisit stop;
        stop.waypoint_id = s.at("id").get<int>();
        stop.arrival = s.at("arrival").get<Seconds>();
        stop.departure = stop.arrival;
        if (instance && instance->has_waypoint(stop.waypoint_id)) {
          const auto& w = instance->waypoint(stop.waypoint_id);
          stop.departure = std::max(stop.arrival, w.window.earliest) + w.service_duration;
        }
        route.stops.push_back(stop);
      }
      plan.routes.push_back(std::move(route));
    }
    return plan;
  });
}

Json cluster_set_to_json(const clusterer::ClusterSet& set) {
  Json out = Json::array();
  for (std::size_t c = 0; c < set.clusters.size(); ++c) {
    Json members = Json::array();
    for (const auto i : set.clusters[c]) members.push_back(i + 1);
    out.push_back({{"members", std::move(members)},
                   {"radius", c < set.radius.size() ? set.radius[c] : 0},
                   {"depth", c < set.depth.size() ? set.depth[c] : 0}});
  }
  return out;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

ProblemInstance read_instance(const std::filesystem::path& path) {
  return instance_from_json(read_json(path));
}

RoutePlan read_plan(const std::filesystem::path& path, const ProblemInstance& instance) {
  return plan_from_json(read_json(path), &instance);
}

}  // namespace route_forge::io
