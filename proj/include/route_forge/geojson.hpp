#pragma once

#include <filesystem>

#include <json.hpp>

#include "route_forge/model.hpp"

namespace route_forge::geojson {

/// RFC 7946 FeatureCollection: a depot Point, one Point per visited
/// waypoint, and one LineString per non-empty route (depot, then stops).
/// Positions are [lon, lat].
nlohmann::json to_geojson(const RoutePlan& plan, const ProblemInstance& instance);

void export_geojson(const RoutePlan& plan, const ProblemInstance& instance,
                    const std::filesystem::path& path);

}  // namespace route_forge::geojson
