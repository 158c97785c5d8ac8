#pragma once

namespace poikit::geo {

struct GeoPoint {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
};

/// hav(theta) = sin^2(theta / 2).
double hav(double theta_rad);

/// Great-circle distance between two points on a sphere of the given radius,
/// in meters. Computes h = hav(dphi) + cos(phi1) cos(phi2) hav(dlambda) and
/// inverts with d = 2 r asin(sqrt(h)); h is clamped into [0, 1] first so
/// near-antipodal rounding cannot leave the asin domain. Result is in
/// [0, pi * radius].
double haversine_distance(const GeoPoint& p1, const GeoPoint& p2, double radius);

}  // namespace poikit::geo
