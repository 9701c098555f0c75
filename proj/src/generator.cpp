#include "route_forge/generator.hpp"

#include <algorithm>
#include <random>

#include "route_forge/error.hpp"

namespace route_forge::bench {

namespace {

struct Blob {
  double lat, lon, sigma_lat, sigma_lon;
};

}  // namespace

ProblemInstance generate_instance(const GeneratorConfig& config) {
  if (config.n_waypoints == 0) throw Error(ErrorCode::InvalidArgument, "n_waypoints must be >= 1");
  if (config.demand_min < 0 || config.demand_max < config.demand_min) {
    throw Error(ErrorCode::InvalidArgument, "bad demand range");
  }
  if (config.vehicle_capacity < config.demand_max) {
    throw Error(ErrorCode::InvalidArgument, "vehicle capacity below the largest demand");
  }
  const auto& reg = config.region;
  if (!(reg.lat_min < reg.lat_max) || !(reg.lon_min < reg.lon_max)) {
    throw Error(ErrorCode::InvalidArgument, "empty region");
  }

  std::mt19937_64 rng(config.seed);
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto uniform_int = [&](auto lo, auto hi) {
    return std::uniform_int_distribution<decltype(lo)>(lo, hi)(rng);
  };

  const double lat_span = reg.lat_max - reg.lat_min;
  const double lon_span = reg.lon_max - reg.lon_min;
  const int blob_count = uniform_int(5, 15);
  std::vector<Blob> blobs;
  std::vector<double> weights;
  for (int b = 0; b < blob_count; ++b) {
    const double spread = uniform(0.01, 0.05);
    blobs.push_back({uniform(reg.lat_min + 0.1 * lat_span, reg.lat_max - 0.1 * lat_span),
                     uniform(reg.lon_min + 0.1 * lon_span, reg.lon_max - 0.1 * lon_span),
                     spread * lat_span, spread * lon_span});
    weights.push_back(uniform(0.5, 2.0));
  }
  std::discrete_distribution<int> pick(weights.begin(), weights.end());
  std::normal_distribution<double> gauss(0.0, 1.0);

  ProblemInstance inst;
  inst.depot.pos = {(reg.lat_min + reg.lat_max) / 2.0, (reg.lon_min + reg.lon_max) / 2.0};
  inst.depot.pickup_window = {0, config.depot_window};
  inst.travel.speed_mps = config.speed_mps;

  inst.waypoints.reserve(config.n_waypoints);
  for (std::size_t i = 0; i < config.n_waypoints; ++i) {
    const auto& blob = blobs[static_cast<std::size_t>(pick(rng))];
    geo::GeoPoint p{};
    bool inside = false;
    for (int attempt = 0; attempt < 64 && !inside; ++attempt) {
      p = {blob.lat + blob.sigma_lat * gauss(rng), blob.lon + blob.sigma_lon * gauss(rng)};
      inside = p.lat >= reg.lat_min && p.lat <= reg.lat_max && p.lon >= reg.lon_min &&
               p.lon <= reg.lon_max;
    }
    p.lat = std::clamp(p.lat, reg.lat_min, reg.lat_max);
    p.lon = std::clamp(p.lon, reg.lon_min, reg.lon_max);

    Waypoint w;
    w.id = static_cast<int>(i) + 1;
    w.pos = p;
    w.demand = uniform_int(config.demand_min, config.demand_max);
    if (config.window_style == WindowStyle::Wide) {
      w.window = {0, config.horizon};
    } else {
      const Seconds len = std::min<Seconds>(config.horizon, uniform_int(Seconds{2 * 3600}, Seconds{6 * 3600}));
      const Seconds start = uniform_int(Seconds{0}, config.horizon - len);
      w.window = {start, start + len};
    }
    inst.waypoints.push_back(w);
  }

  const std::size_t fleet = config.fleet_size.value_or((config.n_waypoints + 9) / 10);
  for (std::size_t k = 0; k < std::max<std::size_t>(fleet, 1); ++k) {
    inst.vehicles.push_back({static_cast<int>(k) + 1, config.vehicle_capacity});
  }
  check_instance(inst);
  return inst;
}

}  // namespace route_forge::bench
