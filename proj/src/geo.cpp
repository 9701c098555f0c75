#include "route_forge/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "route_forge/error.hpp"

namespace route_forge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInstance: return "INVALID_INSTANCE";
    case ErrorCode::UnknownWaypoint: return "UNKNOWN_WAYPOINT";
    case ErrorCode::InfeasibleSequence: return "INFEASIBLE_SEQUENCE";
    case ErrorCode::NegativeRadius: return "NEGATIVE_RADIUS";
    case ErrorCode::IndexOutOfRange: return "INDEX_OUT_OF_RANGE";
    case ErrorCode::EmptyInput: return "EMPTY_INPUT";
    case ErrorCode::NoSolutionFound: return "NO_SOLUTION_FOUND";
    case ErrorCode::RecursionLimit: return "RECURSION_LIMIT";
    case ErrorCode::UnassignedWaypoints: return "UNASSIGNED_WAYPOINTS";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::Io: return "IO_ERROR";
    case ErrorCode::Parse: return "PARSE_ERROR";
  }
  return "UNKNOWN";
}

namespace geo {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

bool valid(const GeoPoint& p) noexcept {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && std::abs(p.lat) <= 90.0 &&
         std::abs(p.lon) <= 180.0;
}

double haversine_distance(const GeoPoint& a, const GeoPoint& b) noexcept {
  // Absolute differences and a commutative product keep the result identical
  // for swapped arguments.
  const double lat1 = a.lat * kDegToRad;
  const double lat2 = b.lat * kDegToRad;
  const double dlat = std::abs(b.lat - a.lat) * kDegToRad;
  const double dlon = std::abs(b.lon - a.lon) * kDegToRad;
  const double s_lat = std::sin(dlat * 0.5);
  const double s_lon = std::sin(dlon * 0.5);
  const double cos_prod = lat1 <= lat2 ? std::cos(lat1) * std::cos(lat2)
                                       : std::cos(lat2) * std::cos(lat1);
  const double h = s_lat * s_lat + cos_prod * s_lon * s_lon;
  return 2.0 * kMetersPerRadian * std::asin(std::min(1.0, std::sqrt(h)));
}

double meters_to_radians(double radius_m) {
  if (!(radius_m >= 0.0)) {
    throw Error(ErrorCode::NegativeRadius, "radius " + std::to_string(radius_m) + " m");
  }
  return radius_m / kMetersPerRadian;
}

}  // namespace geo
}  // namespace route_forge
