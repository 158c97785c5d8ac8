#include <cmath>
#include <fstream>
#include <string>

#include "doctest.h"
#include "poikit/config.hpp"
#include "poikit/csv.hpp"
#include "poikit/geojson.hpp"
#include "poikit/types.hpp"
#include "support/tempdir.hpp"
#include "support/testgen.hpp"

using namespace poikit;
using testsupport::TempDir;

TEST_CASE("location validation") {
  CHECK_NOTHROW(make_location_sample("u", 1000, 1.3521, 103.8198, 10.0));

  CHECK_THROWS_WITH_AS(make_location_sample("u", 0, 95.0, 103.8, 10.0),
                       "latitude out of range", std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_location_sample("u", 0, 1.0, 181.0, 10.0),
                       "longitude out of range", std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_location_sample("u", 0, 1.0, 103.8, 0.0),
                       "accuracy must be positive", std::invalid_argument);
  CHECK_THROWS_AS(make_location_sample("u", 0, 1.0, 103.8, -3.0), std::invalid_argument);
  CHECK_THROWS_AS(make_location_sample("", 0, 1.0, 103.8, 1.0), std::invalid_argument);

  const double nan = std::nan("");
  CHECK_THROWS_AS(make_location_sample("u", 0, nan, 103.8, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_location_sample("u", 0, 1.0, 103.8, nan), std::invalid_argument);
}

TEST_CASE("sensor validation") {
  SensorSample ok;
  ok.user_id = "u";
  ok.t = 5;
  ok.noise_norm = 10.0;
  CHECK_NOTHROW(make_sensor_sample(ok));

  SensorSample bad = ok;
  bad.noise_norm = 10.5;
  CHECK_THROWS_AS(make_sensor_sample(bad), std::invalid_argument);
  bad = ok;
  bad.velocity = -1.0;
  CHECK_THROWS_AS(make_sensor_sample(bad), std::invalid_argument);
  bad = ok;
  bad.battery_charging = 2;
  CHECK_THROWS_AS(make_sensor_sample(bad), std::invalid_argument);
  bad = ok;
  bad.accuracy = 0.0;
  CHECK_THROWS_AS(make_sensor_sample(bad), std::invalid_argument);
}

TEST_CASE("reader rejects carry line numbers and reasons") {
  TempDir tmp;
  {
    std::ofstream f(tmp.file("loc.csv"));
    f << "user_id,t,lat,lon,accuracy\n"
      << "u1,1000,1.3521,103.8198,10\n"
      << "u1,1300,95.0,103.8198,10\n"
      << "u1,1600,1.35,103.82,0\n"
      << "u1,xx,1.35,103.82,5\n"
      << "u1,1900,1.35,103.82,5\n";
  }
  auto read = io::read_location_file(tmp.file("loc.csv"));
  CHECK(read.rows == 5);
  CHECK(read.samples.size() == 2);
  REQUIRE(read.rejects.size() == 3);
  CHECK(read.rejects[0].line == 3);
  CHECK(read.rejects[0].message == "latitude out of range");
  CHECK(read.rejects[1].line == 4);
  CHECK(read.rejects[1].message == "accuracy must be positive");
  CHECK(read.rejects[2].line == 5);
}

TEST_CASE("reader tolerates CRLF, blank lines, reordered and extra columns") {
  TempDir tmp;
  {
    std::ofstream f(tmp.file("loc.csv"), std::ios::binary);
    f << "t,user_id,extra,lat,lon,accuracy\r\n"
      << "1000,u1,ignored,1.35,103.8,12\r\n"
      << "\r\n"
      << "1300,u1,,1.36,103.81,9\r\n";
  }
  auto read = io::read_location_file(tmp.file("loc.csv"));
  CHECK(read.rejects.empty());
  REQUIRE(read.samples.size() == 2);
  CHECK(read.samples[0].user_id == "u1");
  CHECK(read.samples[0].lat == 1.35);
  CHECK(read.samples[1].accuracy == 9.0);
}

TEST_CASE("sensor rows with unknown activity labels are rejected") {
  TempDir tmp;
  {
    std::ofstream f(tmp.file("sen.csv"));
    f << "user_id,t,velocity,accuracy,noise_raw,battery_charging,light,activity\n"
      << "u1,1000,,,,,,Jogging\n"
      << "u1,1300,,,,,,Still\n"
      << "u1,1600,,,,,0.5,\n";
  }
  auto read = io::read_sensor_file(tmp.file("sen.csv"));
  REQUIRE(read.samples.size() == 2);
  REQUIRE(read.rejects.size() == 1);
  CHECK(read.rejects[0].line == 2);
  CHECK(read.rejects[0].message == "unknown activity label 'Jogging'");
}

TEST_CASE("missing file and missing header are fatal") {
  TempDir tmp;
  CHECK_THROWS_AS(io::read_location_file(tmp.file("nope.csv")), InputError);
  {
    std::ofstream f(tmp.file("bad.csv"));
    f << "user_id,t,lat\n";
  }
  CHECK_THROWS_AS(io::read_location_file(tmp.file("bad.csv")), InputError);
}

TEST_CASE("location file round trip") {
  TempDir tmp;
  testgen::Rng rng(31);
  std::vector<LocationSample> samples;
  Timestamp t = 1600000000;
  for (int i = 0; i < 200; ++i) {
    samples.push_back({"u" + std::to_string(i % 3), t, rng.uniform(-90.0, 90.0),
                       rng.uniform(-180.0, 180.0), rng.uniform(0.5, 500.0)});
    t += rng.uniform_int(1, 1000);
  }
  io::write_location_file(tmp.file("loc.csv"), samples);
  auto read = io::read_location_file(tmp.file("loc.csv"));
  CHECK(read.rejects.empty());
  REQUIRE(read.samples.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(read.samples[i].user_id == samples[i].user_id);
    CHECK(read.samples[i].t == samples[i].t);
    CHECK(read.samples[i].lat == samples[i].lat);  // bit-exact round trip
    CHECK(read.samples[i].lon == samples[i].lon);
    CHECK(read.samples[i].accuracy == samples[i].accuracy);
  }
}

TEST_CASE("sensor file round trip with absent fields") {
  TempDir tmp;
  testgen::Rng rng(32);
  std::vector<SensorSample> samples;
  Timestamp t = 1600000000;
  for (int i = 0; i < 200; ++i) {
    SensorSample s;
    s.user_id = "u";
    s.t = t;
    if (rng.chance(0.7)) s.velocity = rng.uniform(0.0, 40.0);
    if (rng.chance(0.7)) s.accuracy = rng.uniform(1.0, 200.0);
    if (rng.chance(0.7)) s.noise_raw = rng.uniform(0.0, 100.0);
    if (rng.chance(0.5)) s.noise_norm = rng.uniform(0.0, 10.0);
    if (rng.chance(0.7)) s.battery_charging = rng.chance(0.5) ? 1 : 0;
    if (rng.chance(0.7)) s.light = rng.uniform(0.0, 30000.0);
    if (rng.chance(0.7))
      s.activity = static_cast<Activity>(rng.uniform_int(0, 2));
    samples.push_back(std::move(s));
    t += rng.uniform_int(1, 1000);
  }
  io::write_sensor_file(tmp.file("sen.csv"), samples);
  auto read = io::read_sensor_file(tmp.file("sen.csv"));
  CHECK(read.rejects.empty());
  REQUIRE(read.samples.size() == samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(read.samples[i].t == samples[i].t);
    CHECK(read.samples[i].velocity == samples[i].velocity);
    CHECK(read.samples[i].accuracy == samples[i].accuracy);
    CHECK(read.samples[i].noise_raw == samples[i].noise_raw);
    CHECK(read.samples[i].noise_norm == samples[i].noise_norm);
    CHECK(read.samples[i].battery_charging == samples[i].battery_charging);
    CHECK(read.samples[i].light == samples[i].light);
    CHECK(read.samples[i].activity == samples[i].activity);
  }
}

TEST_CASE("stay point and report round trips") {
  TempDir tmp;
  testgen::Rng rng(33);

  std::vector<io::UserStayPoints> users(2);
  users[0].user_id = "alice";
  users[1].user_id = "bob";
  for (auto& u : users)
    for (int i = 0; i < 40; ++i) {
      StayPoint sp;
      sp.centroid_lat = rng.uniform(-90.0, 90.0);
      sp.centroid_lon = rng.uniform(-180.0, 180.0);
      sp.t_arrive = rng.uniform_int(0, 1u << 30);
      sp.t_depart = sp.t_arrive + rng.uniform_int(1, 100000);
      sp.mean_accuracy = rng.uniform(1.0, 300.0);
      sp.member_begin = static_cast<std::size_t>(rng.uniform_int(0, 1000));
      sp.member_end = sp.member_begin + static_cast<std::size_t>(rng.uniform_int(0, 50));
      u.stay_points.push_back(sp);
    }
  io::write_stay_points_file(tmp.file("sp.tsv"), users);
  auto sp_read = io::read_stay_points_file(tmp.file("sp.tsv"));
  REQUIRE(sp_read.size() == 2);
  for (std::size_t ui = 0; ui < 2; ++ui) {
    REQUIRE(sp_read[ui].stay_points.size() == users[ui].stay_points.size());
    for (std::size_t i = 0; i < users[ui].stay_points.size(); ++i) {
      const auto& a = users[ui].stay_points[i];
      const auto& b = sp_read[ui].stay_points[i];
      CHECK(a.centroid_lat == b.centroid_lat);
      CHECK(a.centroid_lon == b.centroid_lon);
      CHECK(a.t_arrive == b.t_arrive);
      CHECK(a.t_depart == b.t_depart);
      CHECK(a.mean_accuracy == b.mean_accuracy);
      CHECK(a.member_begin == b.member_begin);
      CHECK(a.member_end == b.member_end);
    }
  }

  std::vector<io::UserEnvReports> reports(1);
  reports[0].user_id = "alice";
  for (int i = 0; i < 30; ++i) {
    EnvReport r;
    r.poi_cluster_id = i + 1;
    r.n_slots = static_cast<std::size_t>(rng.uniform_int(1, 500));
    if (rng.chance(0.6)) r.p1 = rng.uniform(0.0, 100.0);
    if (rng.chance(0.6)) r.p2 = rng.uniform(0.0, 100.0);
    if (rng.chance(0.6)) r.p3 = rng.uniform(0.0, 100.0);
    if (rng.chance(0.6)) r.p4 = rng.uniform(0.0, 100.0);
    r.p0 = rng.uniform(0.0, 100.0);
    r.io_label = static_cast<IoLabel>(rng.uniform_int(0, 2));
    r.pp_label = static_cast<PpLabel>(rng.uniform_int(0, 2));
    r.low_confidence = rng.chance(0.3);
    reports[0].reports.push_back(r);
  }
  io::write_env_reports_file(tmp.file("env.tsv"), reports);
  auto env_read = io::read_env_reports_file(tmp.file("env.tsv"));
  REQUIRE(env_read.size() == 1);
  REQUIRE(env_read[0].reports.size() == reports[0].reports.size());
  for (std::size_t i = 0; i < reports[0].reports.size(); ++i) {
    const auto& a = reports[0].reports[i];
    const auto& b = env_read[0].reports[i];
    CHECK(a.poi_cluster_id == b.poi_cluster_id);
    CHECK(a.n_slots == b.n_slots);
    CHECK(a.p1 == b.p1);
    CHECK(a.p2 == b.p2);
    CHECK(a.p3 == b.p3);
    CHECK(a.p4 == b.p4);
    CHECK(a.p0 == b.p0);
    CHECK(a.io_label == b.io_label);
    CHECK(a.pp_label == b.pp_label);
    CHECK(a.low_confidence == b.low_confidence);
  }
}

TEST_CASE("trajectory file round trip") {
  TempDir tmp;
  std::vector<io::UserTrajectory> users = {
      {"u1", {{1, 100, 2000}, {2, 3000, 5000}}},
      {"u2", {{1, 50, 70}}},
  };
  io::write_trajectory_file(tmp.file("traj.tsv"), users);
  auto read = io::read_trajectory_file(tmp.file("traj.tsv"));
  REQUIRE(read.size() == 2);
  CHECK(read[0].visits.size() == 2);
  CHECK(read[0].visits[1].cluster_id == 2);
  CHECK(read[1].visits[0].t_depart == 70);
}

TEST_CASE("assignment file round trip") {
  TempDir tmp;
  std::vector<io::UserAssignments> users = {{"u1", {1, 1, 2, 3}}, {"u2", {1}}};
  io::write_assignments_file(tmp.file("as.tsv"), users);
  auto read = io::read_assignments_file(tmp.file("as.tsv"));
  REQUIRE(read.size() == 2);
  CHECK(read[0].cluster_ids == std::vector<int>{1, 1, 2, 3});
  CHECK(read[1].cluster_ids == std::vector<int>{1});
}

TEST_CASE("geojson feature round trip") {
  TempDir tmp;
  testgen::Rng rng(34);
  std::vector<io::PoiFeature> features;
  for (int i = 0; i < 25; ++i) {
    io::PoiFeature f;
    f.user_id = "u" + std::to_string(i % 2);
    f.cluster_id = i + 1;
    f.member_count = static_cast<std::size_t>(rng.uniform_int(1, 20));
    f.centroid_lat = rng.uniform(-90.0, 90.0);
    f.centroid_lon = rng.uniform(-180.0, 180.0);
    f.first_arrive = rng.uniform_int(0, 1u << 30);
    f.last_depart = f.first_arrive + rng.uniform_int(1, 100000);
    if (rng.chance(0.7)) {
      EnvReport r;
      r.poi_cluster_id = f.cluster_id;
      r.n_slots = static_cast<std::size_t>(rng.uniform_int(1, 200));
      if (rng.chance(0.6)) r.p1 = rng.uniform(0.0, 100.0);
      if (rng.chance(0.6)) r.p2 = rng.uniform(0.0, 100.0);
      if (rng.chance(0.6)) r.p3 = rng.uniform(0.0, 100.0);
      if (rng.chance(0.6)) r.p4 = rng.uniform(0.0, 100.0);
      r.p0 = rng.uniform(0.0, 100.0);
      r.io_label = static_cast<IoLabel>(rng.uniform_int(0, 2));
      r.pp_label = static_cast<PpLabel>(rng.uniform_int(0, 2));
      r.low_confidence = rng.chance(0.3);
      f.report = r;
    }
    features.push_back(std::move(f));
  }
  io::write_geojson_file(tmp.file("poi.geojson"), features);
  const auto read = io::read_geojson_file(tmp.file("poi.geojson"));
  REQUIRE(read.size() == features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& a = features[i];
    const auto& b = read[i];
    CHECK(a.user_id == b.user_id);
    CHECK(a.cluster_id == b.cluster_id);
    CHECK(a.member_count == b.member_count);
    CHECK(a.centroid_lat == b.centroid_lat);
    CHECK(a.centroid_lon == b.centroid_lon);
    CHECK(a.first_arrive == b.first_arrive);
    CHECK(a.last_depart == b.last_depart);
    CHECK(a.report.has_value() == b.report.has_value());
    if (a.report && b.report) {
      CHECK(a.report->p1 == b.report->p1);
      CHECK(a.report->p2 == b.report->p2);
      CHECK(a.report->p3 == b.report->p3);
      CHECK(a.report->p4 == b.report->p4);
      CHECK(a.report->p0 == b.report->p0);
      CHECK(a.report->io_label == b.report->io_label);
      CHECK(a.report->pp_label == b.report->pp_label);
      CHECK(a.report->n_slots == b.report->n_slots);
      CHECK(a.report->low_confidence == b.report->low_confidence);
    }
  }
}

TEST_CASE("config snapshot round trip") {
  TempDir tmp;
  PipelineConfig cfg;
  cfg.theta_t_min_stay = 612.5;
  cfg.th_g = 27.25;
  cfg.slot_len = 240;
  cfg.noise_window = 86400;
  {
    std::ofstream f(tmp.file("snap.cfg"));
    f << config_to_text(cfg);
  }
  const auto back = load_config_file(tmp.file("snap.cfg"));
  CHECK(back.theta_t_min_stay == cfg.theta_t_min_stay);
  CHECK(back.theta_t_gap == cfg.theta_t_gap);
  CHECK(back.theta_d_valid == cfg.theta_d_valid);
  CHECK(back.theta_l_eps_cap == cfg.theta_l_eps_cap);
  CHECK(back.th_g == cfg.th_g);
  CHECK(back.th_n == cfg.th_n);
  CHECK(back.th_l == cfg.th_l);
  CHECK(back.slot_len == cfg.slot_len);
  CHECK(back.earth_radius == cfg.earth_radius);
  CHECK(back.label_margin_warn == cfg.label_margin_warn);
  CHECK(back.noise_window == cfg.noise_window);
}

TEST_CASE("config file parsing and validation") {
  TempDir tmp;
  {
    std::ofstream f(tmp.file("good.cfg"));
    f << "# thresholds\n"
      << "theta_t_min_stay = 600\n"
      << "th_g = 25   # meters\n"
      << "slot_len = 120\n";
  }
  auto cfg = load_config_file(tmp.file("good.cfg"));
  CHECK(cfg.theta_t_min_stay == 600.0);
  CHECK(cfg.th_g == 25.0);
  CHECK(cfg.slot_len == 120);
  CHECK(cfg.theta_t_gap == 1200.0);  // untouched default

  {
    std::ofstream f(tmp.file("unknown.cfg"));
    f << "bogus_key = 1\n";
  }
  CHECK_THROWS_AS(load_config_file(tmp.file("unknown.cfg")), ConfigError);

  {
    std::ofstream f(tmp.file("bad.cfg"));
    f << "th_g = -5\n";
  }
  CHECK_THROWS_AS(load_config_file(tmp.file("bad.cfg")), ConfigError);

  PipelineConfig zero;
  zero.slot_len = 0;
  CHECK_THROWS_AS(validate(zero), ConfigError);
}
