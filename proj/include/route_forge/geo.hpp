#pragma once

namespace route_forge::geo {

/// Sphere radius used by every distance in the project, in meters per radian.
inline constexpr double kMetersPerRadian = 6'371'008.8;

struct GeoPoint {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

bool valid(const GeoPoint& p) noexcept;

/// Great-circle distance in meters on the sphere of radius kMetersPerRadian.
/// Bitwise symmetric in its arguments.
double haversine_distance(const GeoPoint& a, const GeoPoint& b) noexcept;

/// Throws Error(NegativeRadius) for radius < 0.
double meters_to_radians(double radius_m);

inline double radians_to_meters(double angle) noexcept {
  return angle * kMetersPerRadian;
}

}  // namespace route_forge::geo
