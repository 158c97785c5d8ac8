#include "poikit/synth.hpp"

#include <fstream>
#include <string>

#include "doctest.h"
#include "poikit/config.hpp"
#include "poikit/csv.hpp"
#include "support/tempdir.hpp"

using namespace poikit;
using testsupport::TempDir;

namespace {

synth::Scenario two_poi_scenario() {
  synth::Scenario sc;
  sc.user_id = "u1";
  sc.seed = 7;
  sc.interval_s = 300;
  synth::PoiSpec a;
  a.lat = 1.30;
  a.lon = 103.80;
  a.dwell_s = 2400;
  a.io = IoLabel::Indoor;
  a.pp = PpLabel::Private;
  synth::PoiSpec b;
  b.lat = 1.34;
  b.lon = 103.85;
  b.dwell_s = 3600;
  b.io = IoLabel::Outdoor;
  b.pp = PpLabel::Public;
  sc.pois = {a, b};
  sc.legs = {{12.0}};
  return sc;
}

}  // namespace

TEST_CASE("generation is a pure function of the seed") {
  const auto sc = two_poi_scenario();
  const auto a = synth::generate(sc);
  const auto b = synth::generate(sc);
  REQUIRE(a.locations.size() == b.locations.size());
  for (std::size_t i = 0; i < a.locations.size(); ++i) {
    CHECK(a.locations[i].t == b.locations[i].t);
    CHECK(a.locations[i].lat == b.locations[i].lat);
    CHECK(a.locations[i].lon == b.locations[i].lon);
    CHECK(a.locations[i].accuracy == b.locations[i].accuracy);
  }
  REQUIRE(a.sensors.size() == b.sensors.size());
  for (std::size_t i = 0; i < a.sensors.size(); ++i) {
    CHECK(a.sensors[i].t == b.sensors[i].t);
    CHECK(a.sensors[i].noise_raw == b.sensors[i].noise_raw);
    CHECK(a.sensors[i].light == b.sensors[i].light);
  }

  auto different = sc;
  different.seed = 8;
  const auto c = synth::generate(different);
  bool same = c.locations.size() == a.locations.size();
  if (same)
    for (std::size_t i = 0; i < a.locations.size(); ++i)
      same = same && c.locations[i].lat == a.locations[i].lat;
  CHECK_FALSE(same);
}

TEST_CASE("files written from the same scenario are byte-identical") {
  TempDir tmp;
  const auto sc = two_poi_scenario();
  for (const char* dir : {"a", "b"}) {
    const auto data = synth::generate(sc);
    std::filesystem::create_directories(tmp.path / dir);
    io::write_location_file((tmp.path / dir / "locations.csv").string(), data.locations);
    io::write_sensor_file((tmp.path / dir / "sensors.csv").string(), data.sensors);
    synth::write_ground_truth_file((tmp.path / dir / "ground_truth.tsv").string(),
                                   data.truth);
  }
  for (const char* name : {"locations.csv", "sensors.csv", "ground_truth.tsv"}) {
    CHECK(io::file_digest((tmp.path / "a" / name).string()) ==
          io::file_digest((tmp.path / "b" / name).string()));
  }
}

TEST_CASE("gps freeze leaves exactly one long gap") {
  PipelineConfig cfg;
  auto sc = two_poi_scenario();
  sc.gps_freeze = synth::FreezeSpec{0, 3600, {}};
  const auto data = synth::generate(sc);

  int long_gaps = 0;
  for (std::size_t i = 1; i < data.locations.size(); ++i) {
    const auto gap = data.locations[i].t - data.locations[i - 1].t;
    CHECK(gap >= 0);
    if (static_cast<double>(gap) > cfg.theta_t_gap) ++long_gaps;
  }
  CHECK(long_gaps == 1);

  // the frozen fix replays one coordinate for the whole freeze
  bool found_freeze = false;
  for (std::size_t i = 2; i < data.locations.size(); ++i) {
    if (data.locations[i].lat == data.locations[i - 1].lat &&
        data.locations[i].lon == data.locations[i - 1].lon)
      found_freeze = true;
  }
  CHECK(found_freeze);
}

TEST_CASE("ground truth lists one entry per dwell") {
  auto sc = two_poi_scenario();
  sc.pois.resize(1);
  sc.legs.clear();
  sc.pois[0].dwell_s = 2400;  // one 40-minute dwell
  const auto data = synth::generate(sc);
  REQUIRE(data.truth.size() == 1);
  CHECK(data.truth[0].t_depart - data.truth[0].t_arrive == 2400);
  CHECK(data.truth[0].io == IoLabel::Indoor);
}

TEST_CASE("duplicate injection repeats leading rows verbatim") {
  auto sc = two_poi_scenario();
  sc.duplicate_rows = 3;
  const auto data = synth::generate(sc);
  for (int i = 0; i < 3; ++i) {
    const auto& first = data.locations[static_cast<std::size_t>(2 * i)];
    const auto& second = data.locations[static_cast<std::size_t>(2 * i + 1)];
    CHECK(first.t == second.t);
    CHECK(first.lat == second.lat);
    CHECK(first.lon == second.lon);
  }
}

TEST_CASE("scenario json parsing and validation") {
  const std::string text = R"({
    "user_id": "ux", "seed": 3, "interval_s": 300,
    "pois": [
      {"lat": 1.3, "lon": 103.8, "dwell_s": 1800, "io": "Outdoor", "pp": "Public"},
      {"lat": 1.31, "lon": 103.81, "dwell_s": 900}
    ],
    "legs": [{"speed_mps": 5}],
    "gps_freeze": {"after_poi": 0, "duration_s": 1200},
    "duplicate_rows": 2
  })";
  const auto sc = synth::scenario_from_json_text(text);
  CHECK(sc.user_id == "ux");
  CHECK(sc.pois.size() == 2);
  CHECK(sc.pois[0].io == IoLabel::Outdoor);
  CHECK(sc.pois[1].pp == PpLabel::Private);  // default
  REQUIRE(sc.gps_freeze.has_value());
  CHECK(sc.gps_freeze->duration_s == 1200);

  CHECK_THROWS_AS(synth::scenario_from_json_text("{"), ConfigError);
  CHECK_THROWS_AS(synth::scenario_from_json_text("{}"), ConfigError);  // no POIs
  CHECK_THROWS_AS(synth::scenario_from_json_text(
                      R"({"pois": [{"lat": 1, "lon": 2, "dwell_s": 0}]})"),
                  ConfigError);
  CHECK_THROWS_AS(synth::scenario_from_json_text(
                      R"({"pois": [{"lat": 1, "lon": 2, "dwell_s": 600}],
                          "gps_freeze": {"after_poi": 0}})"),
                  ConfigError);  // freeze needs a following leg
}

TEST_CASE("ground truth file round trip") {
  TempDir tmp;
  const auto sc = two_poi_scenario();
  const auto data = synth::generate(sc);
  synth::write_ground_truth_file(tmp.file("gt.tsv"), data.truth);
  const auto read = synth::read_ground_truth_file(tmp.file("gt.tsv"));
  REQUIRE(read.size() == data.truth.size());
  for (std::size_t i = 0; i < read.size(); ++i) {
    CHECK(read[i].user_id == data.truth[i].user_id);
    CHECK(read[i].index == data.truth[i].index);
    CHECK(read[i].lat == data.truth[i].lat);
    CHECK(read[i].lon == data.truth[i].lon);
    CHECK(read[i].t_arrive == data.truth[i].t_arrive);
    CHECK(read[i].t_depart == data.truth[i].t_depart);
    CHECK(read[i].io == data.truth[i].io);
    CHECK(read[i].pp == data.truth[i].pp);
  }
}
