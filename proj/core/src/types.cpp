#include "poikit/types.hpp"

#include <cmath>

namespace poikit {

std::string_view to_string(Activity a) {
  switch (a) {
    case Activity::Still: return "Still";
    case Activity::Walking: return "Walking";
    case Activity::Other: return "Other";
  }
  return "Other";
}

std::optional<Activity> activity_from_string(std::string_view s) {
  if (s == "Still") return Activity::Still;
  if (s == "Walking") return Activity::Walking;
  if (s == "Other") return Activity::Other;
  return std::nullopt;
}

std::string_view to_string(IoLabel v) {
  switch (v) {
    case IoLabel::Indoor: return "Indoor";
    case IoLabel::Outdoor: return "Outdoor";
    case IoLabel::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string_view to_string(PpLabel v) {
  switch (v) {
    case PpLabel::Private: return "Private";
    case PpLabel::Public: return "Public";
    case PpLabel::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::optional<IoLabel> io_label_from_string(std::string_view s) {
  if (s == "Indoor") return IoLabel::Indoor;
  if (s == "Outdoor") return IoLabel::Outdoor;
  if (s == "Unknown") return IoLabel::Unknown;
  return std::nullopt;
}

std::optional<PpLabel> pp_label_from_string(std::string_view s) {
  if (s == "Private") return PpLabel::Private;
  if (s == "Public") return PpLabel::Public;
  if (s == "Unknown") return PpLabel::Unknown;
  return std::nullopt;
}

namespace {

bool finite(double v) { return std::isfinite(v); }

}  // namespace

std::optional<std::string> check_location(const LocationSample& s) {
  if (s.user_id.empty()) return "user_id must not be empty";
  if (!finite(s.lat) || s.lat < -90.0 || s.lat > 90.0)
    return "latitude out of range";
  if (!finite(s.lon) || s.lon < -180.0 || s.lon > 180.0)
    return "longitude out of range";
  if (!finite(s.accuracy) || s.accuracy <= 0.0)
    return "accuracy must be positive";
  return std::nullopt;
}

std::optional<std::string> check_sensor(const SensorSample& s) {
  if (s.user_id.empty()) return "user_id must not be empty";
  if (s.velocity && (!finite(*s.velocity) || *s.velocity < 0.0))
    return "velocity must be nonnegative";
  if (s.accuracy && (!finite(*s.accuracy) || *s.accuracy <= 0.0))
    return "accuracy must be positive";
  if (s.noise_raw && (!finite(*s.noise_raw) || *s.noise_raw < 0.0))
    return "noise_raw must be nonnegative";
  if (s.noise_norm && (!finite(*s.noise_norm) || *s.noise_norm < 0.0 || *s.noise_norm > 10.0))
    return "noise_norm must lie in [0, 10]";
  if (s.battery_charging && (*s.battery_charging != 0 && *s.battery_charging != 1))
    return "battery_charging must be 0 or 1";
  if (s.light && (!finite(*s.light) || *s.light < 0.0))
    return "light must be nonnegative";
  return std::nullopt;
}

LocationSample make_location_sample(std::string user_id, Timestamp t, double lat,
                                    double lon, double accuracy) {
  LocationSample s{std::move(user_id), t, lat, lon, accuracy};
  if (auto err = check_location(s)) throw std::invalid_argument(*err);
  return s;
}

SensorSample make_sensor_sample(SensorSample s) {
  if (auto err = check_sensor(s)) throw std::invalid_argument(*err);
  return s;
}

}  // namespace poikit
