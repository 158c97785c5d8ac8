// poikit command line tool: batch conversion of low-rate smartphone location
// and sensor logs into stay points, POI clusters, trajectories and per-POI
// environment reports. See README.md for file formats.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "poikit/cluster.hpp"
#include "poikit/config.hpp"
#include "poikit/csv.hpp"
#include "poikit/geojson.hpp"
#include "poikit/pipeline.hpp"
#include "poikit/prep.hpp"
#include "poikit/score.hpp"
#include "poikit/sfec.hpp"
#include "poikit/staypoint.hpp"
#include "poikit/synth.hpp"
#include "poikit/trajectory.hpp"
#include "poikit/types.hpp"
#include "poikit/version.hpp"

namespace fs = std::filesystem;
using namespace poikit;

namespace {

/// Config resolution: defaults, then the config file, then explicit flags.
struct ConfigArgs {
  std::string config_file;
  double min_stay = 0, theta_t_gap = 0, theta_d = 0, theta_l = 0;
  double th_g = 0, th_n = 0, th_l = 0;
  std::int64_t slot_len = 0;
  CLI::Option* o_min_stay = nullptr;
  CLI::Option* o_theta_t_gap = nullptr;
  CLI::Option* o_theta_d = nullptr;
  CLI::Option* o_theta_l = nullptr;
  CLI::Option* o_th_g = nullptr;
  CLI::Option* o_th_n = nullptr;
  CLI::Option* o_th_l = nullptr;
  CLI::Option* o_slot_len = nullptr;

  void attach_config(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "config file (key = value lines)");
  }
  void attach_staypoint_flags(CLI::App* cmd) {
    o_min_stay = cmd->add_option("--min-stay", min_stay, "minimum stay duration, seconds");
    o_theta_t_gap =
        cmd->add_option("--theta-t-gap", theta_t_gap, "validation gap-time bound, seconds");
    o_theta_d = cmd->add_option("--theta-d", theta_d, "validation gap-distance bound, meters");
  }
  void attach_eps_flag(CLI::App* cmd) {
    o_theta_l = cmd->add_option("--theta-l", theta_l, "reachability radius cap, meters");
  }
  void attach_classify_flags(CLI::App* cmd) {
    o_th_g = cmd->add_option("--th-g", th_g, "GPS accuracy threshold, meters");
    o_th_n = cmd->add_option("--th-n", th_n, "normalized noise threshold");
    o_th_l = cmd->add_option("--th-l", th_l, "light threshold, lux");
    o_slot_len = cmd->add_option("--slot-len", slot_len, "slot length, seconds");
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg =
        config_file.empty() ? PipelineConfig{} : load_config_file(config_file);
    if (o_min_stay && o_min_stay->count()) cfg.theta_t_min_stay = min_stay;
    if (o_theta_t_gap && o_theta_t_gap->count()) cfg.theta_t_gap = theta_t_gap;
    if (o_theta_d && o_theta_d->count()) cfg.theta_d_valid = theta_d;
    if (o_theta_l && o_theta_l->count()) cfg.theta_l_eps_cap = theta_l;
    if (o_th_g && o_th_g->count()) cfg.th_g = th_g;
    if (o_th_n && o_th_n->count()) cfg.th_n = th_n;
    if (o_th_l && o_th_l->count()) cfg.th_l = th_l;
    if (o_slot_len && o_slot_len->count()) cfg.slot_len = slot_len;
    validate(cfg);
    return cfg;
  }
};

template <typename Sample>
std::map<std::string, std::vector<Sample>> group_by_user(std::vector<Sample> samples) {
  std::map<std::string, std::vector<Sample>> by_user;
  for (auto& s : samples) by_user[s.user_id].push_back(std::move(s));
  return by_user;
}

prep::TimeWindow data_range(const std::vector<LocationSample>& locs,
                            const std::vector<SensorSample>& sens) {
  prep::TimeWindow range{0, 0};
  bool seen = false;
  auto widen = [&](Timestamp t) {
    if (!seen) {
      range = {t, t + 1};
      seen = true;
    } else {
      range.begin = std::min(range.begin, t);
      range.end = std::max(range.end, t + 1);
    }
  };
  if (!locs.empty()) {
    widen(locs.front().t);
    widen(locs.back().t);
  }
  if (!sens.empty()) {
    widen(sens.front().t);
    widen(sens.back().t);
  }
  return range;
}

void report_rejects(const std::string& out_path, const io::ReadResult<LocationSample>& loc,
                    const io::ReadResult<SensorSample>* sen) {
  if (loc.rejects.empty() && (!sen || sen->rejects.empty())) return;
  io::write_rejects_file(out_path, "locations", loc.rejects, false);
  if (sen) io::write_rejects_file(out_path, "sensors", sen->rejects, true);
  std::cerr << "rejected " << loc.rejects.size() + (sen ? sen->rejects.size() : 0)
            << " rows, reasons in " << out_path << "\n";
}

// ---------------------------------------------------------------------------
// subcommand state
// ---------------------------------------------------------------------------

struct PreprocessCmd {
  ConfigArgs cfg_args;
  std::string locations, sensors, out_dir = ".";

  int run() const {
    const PipelineConfig cfg = cfg_args.resolve();
    auto loc = io::read_location_file(locations);
    auto sen = io::read_sensor_file(sensors);
    if (loc.samples.empty()) throw InputError("no usable location data in " + locations);

    fs::create_directories(out_dir);
    std::vector<LocationSample> loc_out;
    for (auto& [user, series] : group_by_user(std::move(loc.samples))) {
      auto clean = prep::denoise(std::move(series));
      loc_out.insert(loc_out.end(), clean.begin(), clean.end());
    }
    std::vector<SensorSample> sen_out;
    for (auto& [user, series] : group_by_user(std::move(sen.samples))) {
      auto clean = pipeline::preprocess_sensors(std::move(series), cfg);
      sen_out.insert(sen_out.end(), clean.begin(), clean.end());
    }

    const fs::path dir(out_dir);
    io::write_location_file((dir / "locations_clean.csv").string(), loc_out);
    io::write_sensor_file((dir / "sensors_clean.csv").string(), sen_out);
    report_rejects((dir / "rejects.tsv").string(), loc, &sen);
    std::cout << "locations: " << loc.rows << " rows -> " << loc_out.size()
              << " deduplicated\nsensors: " << sen.rows << " rows -> " << sen_out.size()
              << " deduplicated\n";
    return 0;
  }
};

struct StayPointsCmd {
  ConfigArgs cfg_args;
  std::string locations, out = "stay_points.tsv";
  bool no_validation = false;

  int run() const {
    const PipelineConfig cfg = cfg_args.resolve();
    auto loc = io::read_location_file(locations);
    if (loc.samples.empty()) throw InputError("no usable location data in " + locations);

    std::vector<io::UserStayPoints> out_users;
    std::size_t total = 0;
    for (auto& [user, series] : group_by_user(std::move(loc.samples))) {
      auto clean = prep::denoise(std::move(series));
      auto sps = no_validation ? staypoint::detect_baseline(clean, cfg)
                               : staypoint::detect_vspd(clean, cfg);
      total += sps.size();
      out_users.push_back({user, std::move(sps)});
    }
    io::write_stay_points_file(out, out_users);
    std::cout << total << " stay points from " << out_users.size() << " user(s) -> " << out
              << "\n";
    return 0;
  }
};

struct ClusterCmd {
  ConfigArgs cfg_args;
  std::string stay_points, out = "poi_clusters.geojson";
  std::string assignments_out = "cluster_assignments.tsv";
  std::string method = "dbscan";
  double cut_distance = 200.0;
  int k_max = 8;
  bool pool_users = false;

  std::vector<PoiCluster> cluster_one(const std::vector<StayPoint>& sps,
                                      const PipelineConfig& cfg) const {
    if (method == "dbscan") return cluster::dbscan_poi(sps, cfg);
    if (method == "hierarchical") return cluster::hierarchical_poi(sps, cut_distance, cfg);
    if (method == "kmeans") {
      if (sps.size() < 2) {
        PoiCluster only{1, {0}, sps[0].centroid_lat, sps[0].centroid_lon};
        return {only};
      }
      return cluster::kmeans_poi(sps, k_max, cfg);
    }
    throw ConfigError("unknown clustering method: " + method);
  }

  int run() const {
    const PipelineConfig cfg = cfg_args.resolve();
    auto users = io::read_stay_points_file(stay_points);
    if (users.empty()) throw InputError("no stay points in " + stay_points);

    std::vector<io::UserAssignments> assignments;
    std::vector<io::PoiFeature> features;

    auto emit = [&](const std::string& user, const std::vector<StayPoint>& sps,
                    const std::vector<PoiCluster>& clusters) {
      io::UserAssignments as{user, std::vector<int>(sps.size(), 0)};
      for (const auto& c : clusters) {
        io::PoiFeature f;
        f.user_id = user;
        f.cluster_id = c.cluster_id;
        f.member_count = c.members.size();
        f.centroid_lat = c.centroid_lat;
        f.centroid_lon = c.centroid_lon;
        f.first_arrive = sps[c.members.front()].t_arrive;
        f.last_depart = sps[c.members.front()].t_depart;
        for (std::size_t m : c.members) {
          as.cluster_ids[m] = c.cluster_id;
          f.first_arrive = std::min(f.first_arrive, sps[m].t_arrive);
          f.last_depart = std::max(f.last_depart, sps[m].t_depart);
        }
        features.push_back(std::move(f));
      }
      assignments.push_back(std::move(as));
    };

    if (!pool_users) {
      for (const auto& u : users) emit(u.user_id, u.stay_points, cluster_one(u.stay_points, cfg));
    } else {
      std::vector<StayPoint> pooled;
      std::vector<std::pair<std::size_t, std::size_t>> origin;  // user idx, local idx
      for (std::size_t ui = 0; ui < users.size(); ++ui)
        for (std::size_t i = 0; i < users[ui].stay_points.size(); ++i) {
          pooled.push_back(users[ui].stay_points[i]);
          origin.emplace_back(ui, i);
        }
      const auto clusters = cluster_one(pooled, cfg);
      // split global clusters into per-user views, keeping global ids
      for (std::size_t ui = 0; ui < users.size(); ++ui) {
        std::vector<PoiCluster> local;
        for (const auto& c : clusters) {
          PoiCluster lc;
          lc.cluster_id = c.cluster_id;
          double lat = 0.0, lon = 0.0;
          for (std::size_t m : c.members) {
            if (origin[m].first != ui) continue;
            lc.members.push_back(origin[m].second);
            lat += pooled[m].centroid_lat;
            lon += pooled[m].centroid_lon;
          }
          if (lc.members.empty()) continue;
          lc.centroid_lat = lat / static_cast<double>(lc.members.size());
          lc.centroid_lon = lon / static_cast<double>(lc.members.size());
          local.push_back(std::move(lc));
        }
        emit(users[ui].user_id, users[ui].stay_points, local);
      }
    }

    io::write_geojson_file(out, features);
    io::write_assignments_file(assignments_out, assignments);
    std::cout << features.size() << " POI cluster(s) -> " << out << "\n";
    return 0;
  }
};

struct TrajectoryCmd {
  ConfigArgs cfg_args;
  std::string stay_points, assignments, out = "trajectory.tsv";

  int run() const {
    const PipelineConfig cfg = cfg_args.resolve();
    auto users = io::read_stay_points_file(stay_points);
    auto assigned = io::read_assignments_file(assignments);

    std::vector<io::UserTrajectory> out_users;
    for (const auto& u : users) {
      const io::UserAssignments* as = nullptr;
      for (const auto& a : assigned)
        if (a.user_id == u.user_id) as = &a;
      if (!as || as->cluster_ids.size() != u.stay_points.size())
        throw InputError("assignments do not cover user " + u.user_id);
      out_users.push_back({u.user_id, traj::build_trajectory(u.stay_points, as->cluster_ids, cfg)});
    }
    io::write_trajectory_file(out, out_users);
    std::cout << "trajectories for " << out_users.size() << " user(s) -> " << out << "\n";
    return 0;
  }
};

struct ClassifyCmd {
  ConfigArgs cfg_args;
  std::string locations, sensors, trajectory, out = "env_reports.tsv";

  int run() const {
    const PipelineConfig cfg = cfg_args.resolve();
    auto loc = io::read_location_file(locations);
    auto sen = io::read_sensor_file(sensors);
    auto trajs = io::read_trajectory_file(trajectory);

    auto loc_by_user = group_by_user(std::move(loc.samples));
    auto sen_by_user = group_by_user(std::move(sen.samples));

    std::vector<io::UserEnvReports> out_users;
    for (const auto& ut : trajs) {
      auto locs = prep::denoise(std::move(loc_by_user[ut.user_id]));
      auto sens = pipeline::preprocess_sensors(std::move(sen_by_user[ut.user_id]), cfg);
      const auto slots = prep::time_sync(locs, sens, cfg, data_range(locs, sens));

      std::vector<int> ids;
      for (const auto& v : ut.visits)
        if (std::find(ids.begin(), ids.end(), v.cluster_id) == ids.end())
          ids.push_back(v.cluster_id);
      std::sort(ids.begin(), ids.end());

      io::UserEnvReports reports{ut.user_id, {}};
      for (int id : ids)
        reports.reports.push_back(sfec::classify_poi(id, ut.visits, slots, cfg));
      out_users.push_back(std::move(reports));
    }
    io::write_env_reports_file(out, out_users);
    std::cout << "environment reports for " << out_users.size() << " user(s) -> " << out
              << "\n";
    return 0;
  }
};

struct PipelineCmd {
  ConfigArgs cfg_args;
  std::string locations, sensors, out_dir = "out";
  std::string method = "dbscan";
  double cut_distance = 200.0;
  int k_max = 8;
  int jobs = 0;
  bool pool_users = false;
  bool no_validation = false;

  int run() const {
    const PipelineConfig cfg = cfg_args.resolve();
    pipeline::RunOptions opts;
    opts.validation = !no_validation;
    opts.pool_users = pool_users;
    opts.method = method;
    opts.cut_distance = cut_distance;
    opts.k_max = k_max;
    opts.jobs = jobs;
    const auto result = pipeline::run_pipeline(locations, sensors, cfg, out_dir, opts);
    const auto& m = result.manifest;
    std::cout << "users: " << result.users.size() << "\n"
              << "locations: " << m.location_raw << " raw, " << m.location_dedup
              << " deduplicated\n"
              << "stay points: " << m.stay_points << "\n"
              << "poi clusters: " << m.poi_clusters << "\n"
              << "classified: " << m.pois_classified << "\n"
              << "artifacts in " << out_dir << "\n";
    return 0;
  }
};

struct SynthCmd {
  std::string scenario, out_dir = "synth";

  int run() const {
    const auto sc = synth::load_scenario_file(scenario);
    const auto data = synth::generate(sc);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    io::write_location_file((dir / "locations.csv").string(), data.locations);
    io::write_sensor_file((dir / "sensors.csv").string(), data.sensors);
    synth::write_ground_truth_file((dir / "ground_truth.tsv").string(), data.truth);
    std::cout << data.locations.size() << " location rows, " << data.sensors.size()
              << " sensor rows, " << data.truth.size() << " ground-truth POI(s) -> "
              << out_dir << "\n";
    return 0;
  }
};

struct ScoreCmd {
  ConfigArgs cfg_args;
  std::string run_dir, ground_truth, out;

  int run() const {
    const PipelineConfig cfg = cfg_args.resolve();
    const auto detected =
        io::read_geojson_file((fs::path(run_dir) / "poi_clusters.geojson").string());
    const auto truth = synth::read_ground_truth_file(ground_truth);
    const auto metrics = score::score_run(detected, truth, cfg);
    const std::string text = score::metrics_to_text(metrics);
    std::cout << text;
    if (!out.empty()) {
      std::ofstream f(out);
      if (!f) throw InputError("cannot create output file: " + out);
      f << text;
    }
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"poikit: POI extraction and environment classification for "
               "low-rate smartphone traces"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  PreprocessCmd preprocess;
  auto* c_pre = app.add_subcommand("preprocess", "deduplicate and normalize raw streams");
  preprocess.cfg_args.attach_config(c_pre);
  c_pre->add_option("--locations", preprocess.locations, "location CSV")->required();
  c_pre->add_option("--sensors", preprocess.sensors, "sensor CSV")->required();
  c_pre->add_option("--out-dir", preprocess.out_dir, "output directory");

  StayPointsCmd staypoints;
  auto* c_sp = app.add_subcommand("staypoints", "detect validated stay points");
  staypoints.cfg_args.attach_config(c_sp);
  staypoints.cfg_args.attach_staypoint_flags(c_sp);
  staypoints.cfg_args.attach_eps_flag(c_sp);
  c_sp->add_option("--locations", staypoints.locations, "location CSV")->required();
  c_sp->add_option("--out", staypoints.out, "stay points TSV");
  c_sp->add_flag("--no-validation", staypoints.no_validation,
                 "use the classic scan without the dropout check");

  ClusterCmd cluster_cmd;
  auto* c_cl = app.add_subcommand("cluster", "group stay points into POI clusters");
  cluster_cmd.cfg_args.attach_config(c_cl);
  cluster_cmd.cfg_args.attach_eps_flag(c_cl);
  c_cl->add_option("--stay-points", cluster_cmd.stay_points, "stay points TSV")->required();
  c_cl->add_option("--method", cluster_cmd.method, "dbscan | kmeans | hierarchical")
      ->check(CLI::IsMember({"dbscan", "kmeans", "hierarchical"}));
  c_cl->add_option("--cut-distance", cluster_cmd.cut_distance,
                   "hierarchical dendrogram cut, meters");
  c_cl->add_option("--k-max", cluster_cmd.k_max, "largest k tried by kmeans");
  c_cl->add_flag("--pool-users", cluster_cmd.pool_users, "cluster across users");
  c_cl->add_option("--out", cluster_cmd.out, "POI GeoJSON output");
  c_cl->add_option("--assignments-out", cluster_cmd.assignments_out, "assignment TSV output");

  TrajectoryCmd trajectory;
  auto* c_tr = app.add_subcommand("trajectory", "build per-user visit sequences");
  trajectory.cfg_args.attach_config(c_tr);
  c_tr->add_option("--stay-points", trajectory.stay_points, "stay points TSV")->required();
  c_tr->add_option("--assignments", trajectory.assignments, "assignment TSV")->required();
  c_tr->add_option("--out", trajectory.out, "trajectory TSV");

  ClassifyCmd classify;
  auto* c_cf = app.add_subcommand("classify", "per-POI environment classification");
  classify.cfg_args.attach_config(c_cf);
  classify.cfg_args.attach_classify_flags(c_cf);
  c_cf->add_option("--locations", classify.locations, "location CSV")->required();
  c_cf->add_option("--sensors", classify.sensors, "sensor CSV")->required();
  c_cf->add_option("--trajectory", classify.trajectory, "trajectory TSV")->required();
  c_cf->add_option("--out", classify.out, "environment report TSV");

  PipelineCmd pipeline_cmd;
  auto* c_pl = app.add_subcommand("pipeline", "run every stage end to end");
  pipeline_cmd.cfg_args.attach_config(c_pl);
  pipeline_cmd.cfg_args.attach_staypoint_flags(c_pl);
  pipeline_cmd.cfg_args.attach_eps_flag(c_pl);
  pipeline_cmd.cfg_args.attach_classify_flags(c_pl);
  c_pl->add_option("--locations", pipeline_cmd.locations, "location CSV")->required();
  c_pl->add_option("--sensors", pipeline_cmd.sensors, "sensor CSV")->required();
  c_pl->add_option("--out-dir", pipeline_cmd.out_dir, "artifact directory");
  c_pl->add_option("--method", pipeline_cmd.method, "dbscan | kmeans | hierarchical")
      ->check(CLI::IsMember({"dbscan", "kmeans", "hierarchical"}));
  c_pl->add_option("--cut-distance", pipeline_cmd.cut_distance,
                   "hierarchical dendrogram cut, meters");
  c_pl->add_option("--k-max", pipeline_cmd.k_max, "largest k tried by kmeans");
  c_pl->add_option("--jobs", pipeline_cmd.jobs, "worker threads across users (0 = auto)");
  c_pl->add_flag("--pool-users", pipeline_cmd.pool_users, "cluster across users");
  c_pl->add_flag("--no-validation", pipeline_cmd.no_validation,
                 "use the classic scan without the dropout check");

  SynthCmd synth_cmd;
  auto* c_sy = app.add_subcommand("synth", "generate a synthetic trace from a scenario");
  c_sy->add_option("--scenario", synth_cmd.scenario, "scenario JSON")->required();
  c_sy->add_option("--out-dir", synth_cmd.out_dir, "output directory");

  ScoreCmd score_cmd;
  auto* c_sc = app.add_subcommand("score", "score a run against ground truth");
  score_cmd.cfg_args.attach_config(c_sc);
  c_sc->add_option("--run-dir", score_cmd.run_dir, "pipeline output directory")->required();
  c_sc->add_option("--ground-truth", score_cmd.ground_truth, "ground truth TSV")->required();
  c_sc->add_option("--out", score_cmd.out, "also write metrics to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad flags are a configuration problem
  }

  try {
    if (c_pre->parsed()) return preprocess.run();
    if (c_sp->parsed()) return staypoints.run();
    if (c_cl->parsed()) return cluster_cmd.run();
    if (c_tr->parsed()) return trajectory.run();
    if (c_cf->parsed()) return classify.run();
    if (c_pl->parsed()) return pipeline_cmd.run();
    if (c_sy->parsed()) return synth_cmd.run();
    if (c_sc->parsed()) return score_cmd.run();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
