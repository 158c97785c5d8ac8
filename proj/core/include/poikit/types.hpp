#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Shared domain types for the poikit pipeline. Everything here is a plain
// immutable-after-construction value; instances may be shared freely between
// worker threads. Units policy:
//   - coordinates in degrees, distances in meters
//   - timestamps in integer seconds since epoch (UTC)
//   - noise in device amplitude units (raw) or the normalized [0, 10] scale

namespace poikit {

using Timestamp = std::int64_t;

/// Fatal problem with an input file (missing, unreadable, nothing usable).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid threshold/option combination.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Activity { Still = 0, Walking = 1, Other = 2 };

std::string_view to_string(Activity a);
std::optional<Activity> activity_from_string(std::string_view s);

/// One GPS fix as reported by the device location API. `accuracy` is the
/// radius of the 68%-confidence circle around (lat, lon).
struct LocationSample {
  std::string user_id;
  Timestamp t = 0;
  double lat = 0.0;   // [-90, 90]
  double lon = 0.0;   // [-180, 180]
  double accuracy = 0.0;  // meters, > 0
};

/// One multi-sensor reading. Every field other than the key is optional:
/// devices drop individual sensors all the time, and "absent" must stay
/// distinguishable from zero for the unclassified-slot accounting.
struct SensorSample {
  std::string user_id;
  Timestamp t = 0;
  std::optional<double> velocity;          // m/s, >= 0
  std::optional<double> accuracy;          // meters, > 0
  std::optional<double> noise_raw;         // device amplitude units, >= 0
  std::optional<double> noise_norm;        // [0, 10]
  std::optional<int> battery_charging;     // {0, 1}
  std::optional<double> light;             // lux, >= 0
  std::optional<Activity> activity;
};

/// Returns a rejection reason, or nullopt when the sample is well formed.
std::optional<std::string> check_location(const LocationSample& s);
std::optional<std::string> check_sensor(const SensorSample& s);

/// Checked constructors. Throw std::invalid_argument with the same reason
/// string check_location/check_sensor would report.
LocationSample make_location_sample(std::string user_id, Timestamp t, double lat,
                                    double lon, double accuracy);
SensorSample make_sensor_sample(SensorSample s);

/// A contiguous dwell: the samples samples[member_begin .. member_end]
/// (inclusive) of one user's deduplicated series stayed within the adaptive
/// spatial bound for longer than the minimum stay duration.
struct StayPoint {
  double centroid_lat = 0.0;   // arithmetic mean of member latitudes
  double centroid_lon = 0.0;
  Timestamp t_arrive = 0;      // timestamp of first member
  Timestamp t_depart = 0;      // timestamp of last member
  double mean_accuracy = 0.0;  // mean of member accuracies, meters
  std::size_t member_begin = 0;
  std::size_t member_end = 0;  // inclusive
};

/// A group of mutually reachable stay points; one point of interest.
struct PoiCluster {
  int cluster_id = 0;                 // >= 1, ordered by earliest member arrival
  std::vector<std::size_t> members;   // indices into the stay point list
  double centroid_lat = 0.0;          // mean of member centroids
  double centroid_lon = 0.0;
};

/// One visit in a user's time-ordered trajectory.
struct Visit {
  int cluster_id = 0;
  Timestamp t_arrive = 0;
  Timestamp t_depart = 0;
};

using Trajectory = std::vector<Visit>;

enum class IoLabel { Indoor, Outdoor, Unknown };
enum class PpLabel { Private, Public, Unknown };

std::string_view to_string(IoLabel v);
std::string_view to_string(PpLabel v);
std::optional<IoLabel> io_label_from_string(std::string_view s);
std::optional<PpLabel> pp_label_from_string(std::string_view s);

/// Per-POI classification summary. Confidence percentages are in [0, 100];
/// an absent value means no slot produced evidence for that category
/// (rendered as "-" in reports). p0 is the percentage of slots with no
/// classifiable sensor data at all.
struct EnvReport {
  int poi_cluster_id = 0;
  std::size_t n_slots = 0;
  std::optional<double> p1;  // indoor
  std::optional<double> p2;  // outdoor
  std::optional<double> p3;  // private
  std::optional<double> p4;  // public
  double p0 = 0.0;
  IoLabel io_label = IoLabel::Unknown;
  PpLabel pp_label = PpLabel::Unknown;
  bool low_confidence = false;  // competing percentages closer than the warn margin
};

}  // namespace poikit
