#include "poikit/geo.hpp"

#include <algorithm>
#include <cmath>

namespace poikit::geo {

namespace {

constexpr double kPi = 3.14159265358979323846;

double to_rad(double deg) { return deg * kPi / 180.0; }

}  // namespace

double hav(double theta_rad) {
  const double s = std::sin(theta_rad / 2.0);
  return s * s;
}

double haversine_distance(const GeoPoint& p1, const GeoPoint& p2, double radius) {
  const double phi1 = to_rad(p1.lat);
  const double phi2 = to_rad(p2.lat);
  const double h = hav(phi2 - phi1) +
                   std::cos(phi1) * std::cos(phi2) * hav(to_rad(p2.lon - p1.lon));
  // rounding can push h a hair outside [0, 1] near antipodes
  const double clamped = std::clamp(h, 0.0, 1.0);
  return 2.0 * radius * std::asin(std::sqrt(clamped));
}

}  // namespace poikit::geo
