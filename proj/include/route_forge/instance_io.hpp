#pragma once

#include <filesystem>

#include <json.hpp>

#include "route_forge/clusterer.hpp"
#include "route_forge/model.hpp"

namespace route_forge::io {

using Json = nlohmann::json;

// Instance schema:
//   depot {lat, lon, window:[e,l]}
//   waypoints [{id, lat, lon, demand, window:[e,l], service?}]
//   vehicles [{id, capacity}]
//   travel {speed_mps}
Json instance_to_json(const ProblemInstance& instance);
/// Sorts waypoints and vehicles by id, then runs check_instance().
/// Throws Error(Parse) for schema problems.
ProblemInstance instance_from_json(const Json& j);

// Plan schema: routes [{vehicle, pickup_time, stops:[{id, arrival}]}]
Json plan_to_json(const RoutePlan& plan);
/// Departures are derived from the instance when one is supplied.
RoutePlan plan_from_json(const Json& j, const ProblemInstance* instance = nullptr);

/// Debug dump: [{members:[waypoint ids], radius, depth}].
Json cluster_set_to_json(const clusterer::ClusterSet& set);

Json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);

ProblemInstance read_instance(const std::filesystem::path& path);
RoutePlan read_plan(const std::filesystem::path& path, const ProblemInstance& instance);

}  // namespace route_forge::io
