#include "route_forge/geojson.hpp"

#include "route_forge/error.hpp"
#include "route_forge/instance_io.hpp"

namespace route_forge::geojson {

namespace {

using Json = nlohmann::json;

Json position(const geo::GeoPoint& p) { return Json::array({p.lon, p.lat}); }

Json point_feature(const geo::GeoPoint& p, Json properties) {
  return {{"type", "Feature"},
          {"geometry", {{"type", "Point"}, {"coordinates", position(p)}}},
          {"properties", std::move(properties)}};
}

}  // namespace

Json to_geojson(const RoutePlan& plan, const ProblemInstance& instance) {
  Json features = Json::array();
  features.push_back(point_feature(instance.depot.pos,
                                   {{"role", "depot"},
                                    {"depot", true},
                                    {"window_start", instance.depot.pickup_window.earliest},
                                    {"window_end", instance.depot.pickup_window.latest}}));

  for (const auto& route : plan.routes) {
    if (route.stops.empty()) continue;
    Json coords = Json::array({position(instance.depot.pos)});
    for (const auto& stop : route.stops) {
      if (!instance.has_waypoint(stop.waypoint_id)) {
        throw Error(ErrorCode::UnknownWaypoint, std::to_string(stop.waypoint_id));
      }
      coords.push_back(position(instance.waypoint(stop.waypoint_id).pos));
    }
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "LineString"}, {"coordinates", std::move(coords)}}},
                        {"properties",
                         {{"role", "route"},
                          {"vehicle", route.vehicle_id},
                          {"pickup_time", route.depot_pickup_time},
                          {"stops", route.stops.size()}}}});
  }

  for (const auto& route : plan.routes) {
    for (const auto& stop : route.stops) {
      const auto& w = instance.waypoint(stop.waypoint_id);
      features.push_back(point_feature(w.pos, {{"role", "waypoint"},
                                               {"depot", false},
                                               {"id", w.id},
                                               {"vehicle", route.vehicle_id},
                                               {"demand", w.demand},
                                               {"window_start", w.window.earliest},
                                               {"window_end", w.window.latest},
                                               {"arrival", stop.arrival}}));
    }
  }
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

void export_geojson(const RoutePlan& plan, const ProblemInstance& instance,
                    const std::filesystem::path& path) {
  io::write_json(path, to_geojson(plan, instance));
}

}  // namespace route_forge::geojson
