#pragma once

#include <cstdint>
#include <optional>

#include "route_forge/model.hpp"

namespace route_forge::bench {

/// Lat/lon bounding box in degrees. The default is a 0.4 x 0.5 degree box
/// around Hong Kong.
struct Region {
  double lat_min = 22.2;
  double lat_max = 22.6;
  double lon_min = 113.8;
  double lon_max = 114.3;
};

enum class WindowStyle {
  Wide,   // every waypoint open for the whole horizon
  Mixed,  // random 2-6 h windows inside the horizon
};

struct GeneratorConfig {
  std::size_t n_waypoints = 500;
  std::uint64_t seed = 1;
  Region region;
  int demand_min = 1;
  int demand_max = 2;
  WindowStyle window_style = WindowStyle::Mixed;
  std::optional<std::size_t> fleet_size;  // default ceil(n / 10)
  int vehicle_capacity = 30;
  double speed_mps = 10.0;
  Seconds horizon = 12 * 3600;
  Seconds depot_window = 3600;
};

/// Waypoints drawn from 5-15 Gaussian blobs inside the region, depot at the
/// region centre. Same config, same instance.
ProblemInstance generate_instance(const GeneratorConfig& config);

}  // namespace route_forge::bench
