#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poikit/types.hpp"

// Synthetic trace generation. Scenarios describe ground-truth POIs, the
// travel legs between them and the data artifacts low-rate collection
// produces in the wild (GPS freezes with a long upload gap, accuracy spikes,
// duplicated rows). The generator is fully deterministic given the seed, so
// scenarios double as regression fixtures and scoring ground truth.

namespace poikit::synth {

/// One ground-truth dwell. Sensor emissions follow the declared labels:
/// indoor dwells report poor GPS accuracy and dim light, public dwells loud
/// ambient noise, and so on, unless the field is overridden.
struct PoiSpec {
  double lat = 0.0;
  double lon = 0.0;
  std::int64_t dwell_s = 0;              // rounded to the sampling grid
  IoLabel io = IoLabel::Indoor;
  PpLabel pp = PpLabel::Private;
  std::optional<double> accuracy;        // m; default derived from io
  std::optional<double> noise_raw;       // device units; default derived from pp
  std::optional<double> light;           // lux; default derived from io
  bool charging = false;
  std::optional<Activity> activity;      // default Still
};

struct TravelLeg {
  double speed_mps = 10.0;
};

/// GPS freeze injected during the travel leg that leaves POI `after_poi`:
/// the fix sticks to one coordinate and the record stream has a single gap
/// of `gap_s` (default duration_s minus one sampling interval).
struct FreezeSpec {
  int after_poi = 0;
  std::int64_t duration_s = 3600;
  std::optional<std::int64_t> gap_s;
};

struct Scenario {
  std::string user_id = "u0";
  std::uint64_t seed = 1;
  Timestamp start_time = 1600000000;
  std::int64_t interval_s = 300;         // sampling interval
  double jitter_scale = 0.2;             // position jitter sigma = accuracy * scale
  double travel_accuracy = 20.0;         // m, declared accuracy while moving
  double accuracy_floor = 0.0;           // m, lower bound on every declared accuracy
  std::vector<PoiSpec> pois;
  std::vector<TravelLeg> legs;           // legs[i] goes from poi i to poi i+1
  std::optional<FreezeSpec> gps_freeze;
  int duplicate_rows = 0;                // leading rows emitted twice (upload retry)
  int accuracy_spikes = 0;               // travel fixes with a 10x accuracy blowup
};

struct GroundTruthPoi {
  std::string user_id;
  int index = 0;
  double lat = 0.0;
  double lon = 0.0;
  Timestamp t_arrive = 0;
  Timestamp t_depart = 0;
  IoLabel io = IoLabel::Unknown;
  PpLabel pp = PpLabel::Unknown;
};

struct SynthOutput {
  std::vector<LocationSample> locations;
  std::vector<SensorSample> sensors;
  std::vector<GroundTruthPoi> truth;
};

/// Samples the scenario itinerary on the interval grid. Throws ConfigError
/// for inconsistent scenarios (no POIs, nonpositive interval, bad leg count).
SynthOutput generate(const Scenario& scenario);

/// Scenario file = one JSON object; see README for the schema.
Scenario load_scenario_file(const std::string& path);
Scenario scenario_from_json_text(const std::string& text);

void write_ground_truth_file(const std::string& path,
                             const std::vector<GroundTruthPoi>& truth);
std::vector<GroundTruthPoi> read_ground_truth_file(const std::string& path);

}  // namespace poikit::synth
