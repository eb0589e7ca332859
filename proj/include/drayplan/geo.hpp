#pragma once

#include <cmath>

namespace drayplan {

// Geographic coordinate, degrees. Longitude first to match CSV/JSON column order.
struct LonLat {
  double lon = 0.0;
  double lat = 0.0;
};

inline constexpr double kEarthRadiusMiles = 3958.7613;
inline constexpr double kFeetPerMile = 5280.0;

inline double deg2rad(double d) { return d * M_PI / 180.0; }

// Great-circle distance in miles.
inline double haversine_miles(const LonLat& a, const LonLat& b) {
  const double lat1 = deg2rad(a.lat);
  const double lat2 = deg2rad(b.lat);
  const double dlat = lat2 - lat1;
  const double dlon = deg2rad(b.lon - a.lon);
  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
  return 2.0 * kEarthRadiusMiles * std::asin(std::min(1.0, std::sqrt(h)));
}

inline double haversine_feet(const LonLat& a, const LonLat& b) {
  return haversine_miles(a, b) * kFeetPerMile;
}

}  // namespace drayplan
