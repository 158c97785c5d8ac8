#include "poikit/synth.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "json.hpp"
#include "poikit/csv.hpp"
#include "poikit/geo.hpp"

namespace poikit::synth {

namespace {

constexpr double kEarthRadius = 6371000.0;
constexpr double kMetersPerDegLat = 111320.0;

std::int64_t round_up(std::int64_t v, std::int64_t step) {
  return (v + step - 1) / step * step;
}

struct SensorProfile {
  std::optional<double> velocity;
  std::optional<double> noise_raw;
  std::optional<double> light;
  int charging = 0;
  Activity activity = Activity::Other;
};

/// Streams emissions in timestamp order; all randomness flows through one
/// generator so the output is a pure function of the seed.
class Emitter {
 public:
  Emitter(const Scenario& sc, SynthOutput& out)
      : sc_(sc), out_(out), rng_(sc.seed), unit_(0.0, 1.0) {}

  void location(Timestamp t, double lat, double lon, double accuracy, bool jitter) {
    double j_lat = lat, j_lon = lon;
    if (jitter) {
      const double sigma = accuracy * sc_.jitter_scale;
      const double dy = unit_(rng_) * sigma;  // meters north
      const double dx = unit_(rng_) * sigma;  // meters east
      j_lat += dy / kMetersPerDegLat;
      j_lon += dx / (kMetersPerDegLat * std::cos(lat * 3.14159265358979323846 / 180.0));
    }
    out_.locations.push_back({sc_.user_id, t, j_lat, j_lon, accuracy});
  }

  void sensor(Timestamp t, double accuracy, const SensorProfile& p) {
    SensorSample s;
    s.user_id = sc_.user_id;
    s.t = t;
    s.velocity = p.velocity;
    s.accuracy = accuracy;
    if (p.noise_raw) {
      const double v = *p.noise_raw + unit_(rng_) * 1.0;
      s.noise_raw = std::max(0.0, v);
    }
    if (p.light) {
      const double v = *p.light * (1.0 + 0.1 * unit_(rng_));
      s.light = std::max(0.0, v);
    }
    s.battery_charging = p.charging;
    s.activity = p.activity;
    out_.sensors.push_back(std::move(s));
  }

 private:
  const Scenario& sc_;
  SynthOutput& out_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> unit_;
};

double effective_accuracy(const Scenario& sc, double declared) {
  return std::max(declared, sc.accuracy_floor);
}

double poi_accuracy(const Scenario& sc, const PoiSpec& p) {
  const double declared = p.accuracy ? *p.accuracy : (p.io == IoLabel::Indoor ? 60.0 : 12.0);
  return effective_accuracy(sc, declared);
}

SensorProfile poi_profile(const PoiSpec& p) {
  SensorProfile prof;
  prof.velocity = 0.0;
  if (p.noise_raw) {
    prof.noise_raw = *p.noise_raw;
  } else if (p.pp != PpLabel::Unknown) {
    prof.noise_raw = p.pp == PpLabel::Public ? 80.0 : 8.0;
  }
  if (p.light) {
    prof.light = *p.light;
  } else if (p.io != IoLabel::Unknown) {
    prof.light = p.io == IoLabel::Indoor ? 100.0 : 2000.0;
  }
  prof.charging = p.charging ? 1 : 0;
  prof.activity = p.activity.value_or(Activity::Still);
  return prof;
}

SensorProfile travel_profile(double speed) {
  SensorProfile prof;
  prof.velocity = speed;
  prof.noise_raw = 30.0;
  prof.light = 500.0;
  prof.charging = 0;
  prof.activity = speed < 2.0 ? Activity::Walking : Activity::Other;
  return prof;
}

void check_scenario(const Scenario& sc) {
  if (sc.pois.empty()) throw ConfigError("scenario has no POIs");
  if (sc.interval_s <= 0) throw ConfigError("scenario interval_s must be positive");
  if (!sc.legs.empty() && sc.legs.size() != sc.pois.size() - 1)
    throw ConfigError("scenario needs one leg per consecutive POI pair");
  for (const auto& p : sc.pois)
    if (p.dwell_s <= 0) throw ConfigError("every POI dwell_s must be positive");
  for (const auto& l : sc.legs)
    if (l.speed_mps <= 0) throw ConfigError("leg speed must be positive");
  if (sc.gps_freeze) {
    const auto& f = *sc.gps_freeze;
    if (f.after_poi < 0 || f.after_poi + 1 >= static_cast<int>(sc.pois.size()))
      throw ConfigError("gps_freeze.after_poi must name a travel leg");
    if (f.duration_s <= 0) throw ConfigError("gps_freeze duration must be positive");
  }
}

template <typename Sample>
void duplicate_leading_rows(std::vector<Sample>& rows, int count) {
  // upload-retry artifact: the same record lands in the file twice
  std::vector<Sample> with_dups;
  with_dups.reserve(rows.size() + static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    with_dups.push_back(rows[i]);
    if (static_cast<int>(i) < count) with_dups.push_back(rows[i]);
  }
  rows = std::move(with_dups);
}

}  // namespace

SynthOutput generate(const Scenario& sc) {
  check_scenario(sc);

  SynthOutput out;
  Emitter emit(sc, out);
  const std::int64_t step = sc.interval_s;
  int spikes_left = sc.accuracy_spikes;
  std::int64_t travel_tick_count = 0;

  Timestamp t = sc.start_time;
  for (std::size_t i = 0; i < sc.pois.size(); ++i) {
    const PoiSpec& poi = sc.pois[i];
    const double acc = poi_accuracy(sc, poi);
    const SensorProfile prof = poi_profile(poi);

    const std::int64_t dwell_ticks = poi.dwell_s / step;  // samples at 0..dwell_ticks
    GroundTruthPoi truth{sc.user_id, static_cast<int>(i), poi.lat,
                         poi.lon,    t,                   t + dwell_ticks * step,
                         poi.io,     poi.pp};
    out.truth.push_back(truth);
    for (std::int64_t k = 0; k <= dwell_ticks; ++k) {
      emit.location(t, poi.lat, poi.lon, acc, true);
      emit.sensor(t, acc, prof);
      if (k < dwell_ticks) t += step;
    }

    if (i + 1 >= sc.pois.size()) break;
    const PoiSpec& next = sc.pois[i + 1];
    const double speed = sc.legs.empty() ? 10.0 : sc.legs[i].speed_mps;
    const double dist = geo::haversine_distance({poi.lat, poi.lon}, {next.lat, next.lon},
                                                kEarthRadius);
    // round the leg up to whole ticks so dwells always start on the grid
    const std::int64_t leg_ticks =
        std::max<std::int64_t>(1, (static_cast<std::int64_t>(std::ceil(dist / speed)) +
                                   step - 1) / step);
    const SensorProfile tprof = travel_profile(speed);

    const bool freeze_here =
        sc.gps_freeze && sc.gps_freeze->after_poi == static_cast<int>(i);
    if (freeze_here && leg_ticks < 2)
      throw ConfigError("gps_freeze leg is too short to host a freeze");
    const std::int64_t freeze_at = freeze_here ? std::max<std::int64_t>(1, leg_ticks / 2) : -1;

    for (std::int64_t k = 1; k < leg_ticks; ++k) {
      t += step;
      const double frac = static_cast<double>(k) / static_cast<double>(leg_ticks);
      const double lat = poi.lat + (next.lat - poi.lat) * frac;
      const double lon = poi.lon + (next.lon - poi.lon) * frac;
      double acc_t = effective_accuracy(sc, sc.travel_accuracy);
      ++travel_tick_count;
      if (spikes_left > 0 && travel_tick_count % 3 == 2) {
        acc_t *= 10.0;  // brief urban-canyon blowup
        --spikes_left;
      }
      emit.location(t, lat, lon, acc_t, true);
      emit.sensor(t, acc_t, tprof);

      if (k == freeze_at) {
        // the fix sticks to the tunnel entrance; the stream shows one long
        // gap, then the cached coordinate replays until the freeze ends
        const auto& fz = *sc.gps_freeze;
        const std::int64_t duration = round_up(fz.duration_s, step);
        const std::int64_t gap = fz.gap_s ? round_up(*fz.gap_s, step)
                                          : std::max<std::int64_t>(step, duration - step);
        const double facc = effective_accuracy(sc, sc.travel_accuracy);
        for (std::int64_t off = gap; off <= duration; off += step)
          emit.location(t + off, lat, lon, facc, false);
        t += duration;
      }
    }
    t += step;  // arrival tick of the next dwell
  }

  duplicate_leading_rows(out.locations, sc.duplicate_rows);
  duplicate_leading_rows(out.sensors, sc.duplicate_rows);
  return out;
}

namespace {

using nlohmann::json;

IoLabel parse_io(const json& j, const char* key, IoLabel fallback) {
  if (!j.contains(key)) return fallback;
  auto v = io_label_from_string(j.at(key).get<std::string>());
  if (!v) throw ConfigError(std::string("scenario: bad io label for ") + key);
  return *v;
}

PpLabel parse_pp(const json& j, const char* key, PpLabel fallback) {
  if (!j.contains(key)) return fallback;
  auto v = pp_label_from_string(j.at(key).get<std::string>());
  if (!v) throw ConfigError(std::string("scenario: bad pp label for ") + key);
  return *v;
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
  }

  Scenario sc;
  try {
    sc.user_id = root.value("user_id", sc.user_id);
    sc.seed = root.value("seed", sc.seed);
    sc.start_time = root.value("start_time", sc.start_time);
    sc.interval_s = root.value("interval_s", sc.interval_s);
    sc.jitter_scale = root.value("jitter_scale", sc.jitter_scale);
    sc.travel_accuracy = root.value("travel_accuracy", sc.travel_accuracy);
    sc.accuracy_floor = root.value("accuracy_floor", sc.accuracy_floor);
    sc.duplicate_rows = root.value("duplicate_rows", sc.duplicate_rows);
    sc.accuracy_spikes = root.value("accuracy_spikes", sc.accuracy_spikes);

    for (const auto& jp : root.value("pois", json::array())) {
      PoiSpec p;
      p.lat = jp.at("lat").get<double>();
      p.lon = jp.at("lon").get<double>();
      p.dwell_s = jp.at("dwell_s").get<std::int64_t>();
      p.io = parse_io(jp, "io", p.io);
      p.pp = parse_pp(jp, "pp", p.pp);
      if (jp.contains("accuracy")) p.accuracy = jp.at("accuracy").get<double>();
      if (jp.contains("noise_raw")) p.noise_raw = jp.at("noise_raw").get<double>();
      if (jp.contains("light")) p.light = jp.at("light").get<double>();
      p.charging = jp.value("charging", false);
      if (jp.contains("activity")) {
        auto a = activity_from_string(jp.at("activity").get<std::string>());
        if (!a) throw ConfigError("scenario: unknown activity label");
        p.activity = a;
      }
      sc.pois.push_back(p);
    }
    for (const auto& jl : root.value("legs", json::array())) {
      TravelLeg leg;
      leg.speed_mps = jl.value("speed_mps", leg.speed_mps);
      sc.legs.push_back(leg);
    }
    if (root.contains("gps_freeze")) {
      const auto& jf = root.at("gps_freeze");
      FreezeSpec f;
      f.after_poi = jf.value("after_poi", 0);
      f.duration_s = jf.value("duration_s", f.duration_s);
      if (jf.contains("gap_s")) f.gap_s = jf.at("gap_s").get<std::int64_t>();
      sc.gps_freeze = f;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }

  check_scenario(sc);
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return scenario_from_json_text(text);
}

void write_ground_truth_file(const std::string& path,
                             const std::vector<GroundTruthPoi>& truth) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot create output file: " + path);
  out << "user_id\tpoi_index\tlat\tlon\tt_arrive\tt_depart\tio_label\tpp_label\n";
  for (const auto& g : truth)
    out << g.user_id << '\t' << g.index << '\t' << io::format_double(g.lat) << '\t'
        << io::format_double(g.lon) << '\t' << g.t_arrive << '\t' << g.t_depart << '\t'
        << to_string(g.io) << '\t' << to_string(g.pp) << '\n';
}

std::vector<GroundTruthPoi> read_ground_truth_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file");

  const auto names = io::split_fields(line, '\t');
  auto col = [&](const char* name) -> std::size_t {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw InputError(path + ": header is missing required column '" + std::string(name) + "'");
  };
  const std::size_t c_user = col("user_id"), c_idx = col("poi_index"), c_lat = col("lat"),
                    c_lon = col("lon"), c_arr = col("t_arrive"), c_dep = col("t_depart"),
                    c_io = col("io_label"), c_pp = col("pp_label");

  std::vector<GroundTruthPoi> truth;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto row = io::split_fields(line, '\t');
    auto bad = [&](const char* what) {
      return InputError(path + ":" + std::to_string(lineno) + ": bad " + what);
    };
    GroundTruthPoi g;
    g.user_id = row.at(c_user);
    auto idx = io::parse_int_field(row.at(c_idx));
    auto lat = io::parse_double_field(row.at(c_lat));
    auto lon = io::parse_double_field(row.at(c_lon));
    auto arr = io::parse_int_field(row.at(c_arr));
    auto dep = io::parse_int_field(row.at(c_dep));
    if (!idx || !lat || !lon || !arr || !dep) throw bad("numeric field");
    auto iol = io_label_from_string(row.at(c_io));
    auto ppl = pp_label_from_string(row.at(c_pp));
    if (!iol || !ppl) throw bad("label field");
    g.index = static_cast<int>(*idx);
    g.lat = *lat;
    g.lon = *lon;
    g.t_arrive = *arr;
    g.t_depart = *dep;
    g.io = *iol;
    g.pp = *ppl;
    truth.push_back(std::move(g));
  }
  return truth;
}

}  // namespace poikit::synth
