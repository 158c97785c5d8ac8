#include "poikit/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "poikit/cluster.hpp"
#include "poikit/sfec.hpp"
#include "poikit/staypoint.hpp"
#include "poikit/trajectory.hpp"
#include "poikit/version.hpp"

namespace poikit::pipeline {

namespace {

namespace fs = std::filesystem;

/// Runs fn(0..n-1) on a small worker pool. Every stage function is pure per
/// user and results land in index-addressed slots, so parallel execution
/// cannot change the output. The first exception is rethrown after the join.
template <typename Fn>
void for_each_index_parallel(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t requested =
      jobs > 0 ? static_cast<std::size_t>(jobs)
               : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(requested, n);
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) guarded(i);
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Fits the noise normalizer on the trailing history window and fills
/// noise_norm wherever a raw reading exists. Streams without any noise data
/// pass through untouched.
std::vector<SensorSample> normalize_sensor_noise(std::vector<SensorSample> sensors,
                                                 const PipelineConfig& cfg) {
  if (sensors.empty()) return sensors;
  // fit on the trailing history window only; older readings may predate a
  // microphone change and would skew the extremes
  const Timestamp last = sensors.back().t;
  const prep::TimeWindow window{
      std::max(sensors.front().t, last - cfg.noise_window + 1), last + 1};

  prep::NoiseNormalizer norm;
  try {
    norm = prep::fit_noise_normalizer(sensors, window);
  } catch (const std::invalid_argument&) {
    return sensors;  // no noise history in the window, leave readings raw
  }
  for (auto& s : sensors)
    if (s.noise_raw) s.noise_norm = prep::normalize_noise(*s.noise_raw, norm);
  return sensors;
}

std::vector<PoiCluster> cluster_stay_points(const std::vector<StayPoint>& sps,
                                            const PipelineConfig& cfg,
                                            const RunOptions& opts) {
  if (sps.empty()) return {};
  if (opts.method == "dbscan") return cluster::dbscan_poi(sps, cfg);
  if (opts.method == "hierarchical")
    return cluster::hierarchical_poi(sps, opts.cut_distance, cfg);
  if (opts.method == "kmeans") {
    if (sps.size() < 2) {
      PoiCluster only;
      only.cluster_id = 1;
      only.members = {0};
      only.centroid_lat = sps[0].centroid_lat;
      only.centroid_lon = sps[0].centroid_lon;
      return {only};
    }
    return cluster::kmeans_poi(sps, opts.k_max, cfg);
  }
  throw ConfigError("unknown clustering method: " + opts.method);
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

}  // namespace

std::vector<SensorSample> preprocess_sensors(std::vector<SensorSample> sensors,
                                             const PipelineConfig& cfg) {
  return normalize_sensor_noise(prep::denoise(std::move(sensors)), cfg);
}

UserResult process_user(std::string user_id, std::vector<LocationSample> locations,
                        std::vector<SensorSample> sensors, const PipelineConfig& cfg,
                        const RunOptions& opts) {
  UserResult r;
  r.user_id = std::move(user_id);
  r.locations = prep::denoise(std::move(locations));
  r.sensors = normalize_sensor_noise(prep::denoise(std::move(sensors)), cfg);

  r.stay_points = opts.validation ? staypoint::detect_vspd(r.locations, cfg)
                                  : staypoint::detect_baseline(r.locations, cfg);
  r.clusters = cluster_stay_points(r.stay_points, cfg, opts);
  r.trajectory = traj::build_trajectory(r.stay_points, r.clusters, cfg);
  r.slots = prep::time_sync(r.locations, r.sensors, cfg, data_range(r.locations, r.sensors));

  r.reports.reserve(r.clusters.size());
  for (const auto& c : r.clusters)
    r.reports.push_back(sfec::classify_poi(c.cluster_id, r.trajectory, r.slots, cfg));
  return r;
}

std::vector<io::PoiFeature> collect_features(const std::vector<UserResult>& users) {
  std::vector<io::PoiFeature> features;
  for (const auto& u : users) {
    for (std::size_t ci = 0; ci < u.clusters.size(); ++ci) {
      const auto& c = u.clusters[ci];
      io::PoiFeature f;
      f.user_id = u.user_id;
      f.cluster_id = c.cluster_id;
      f.member_count = c.members.size();
      f.centroid_lat = c.centroid_lat;
      f.centroid_lon = c.centroid_lon;
      Timestamp first = u.stay_points[c.members.front()].t_arrive;
      Timestamp last = u.stay_points[c.members.front()].t_depart;
      for (std::size_t m : c.members) {
        first = std::min(first, u.stay_points[m].t_arrive);
        last = std::max(last, u.stay_points[m].t_depart);
      }
      f.first_arrive = first;
      f.last_depart = last;
      if (ci < u.reports.size()) f.report = u.reports[ci];
      features.push_back(std::move(f));
    }
  }
  return features;
}

std::string manifest_to_text(const RunManifest& m) {
  std::ostringstream out;
  out << "tool_version\t" << m.tool_version << "\n"
      << "location_file_digest\t" << m.location_digest << "\n"
      << "sensor_file_digest\t" << m.sensor_digest << "\n"
      << "location_rows\t" << m.location_rows << "\n"
      << "location_rejected\t" << m.location_rejected << "\n"
      << "location_raw\t" << m.location_raw << "\n"
      << "location_dedup\t" << m.location_dedup << "\n"
      << "sensor_rows\t" << m.sensor_rows << "\n"
      << "sensor_rejected\t" << m.sensor_rejected << "\n"
      << "sensor_raw\t" << m.sensor_raw << "\n"
      << "sensor_dedup\t" << m.sensor_dedup << "\n"
      << "stay_points\t" << m.stay_points << "\n"
      << "poi_clusters\t" << m.poi_clusters << "\n"
      << "pois_classified\t" << m.pois_classified << "\n";
  std::istringstream cfg(config_to_text(m.config));
  std::string line;
  while (std::getline(cfg, line)) {
    const auto eq = line.find(" = ");
    out << "config." << line.substr(0, eq) << '\t' << line.substr(eq + 3) << "\n";
  }
  return out.str();
}

namespace {

/// Pooled mode: stay points from every user are clustered together, cluster
/// ids are global, and each user keeps a local view for trajectory building.
struct PooledView {
  std::vector<PoiCluster> global_clusters;
  // per user: clusters restricted to that user's stay points (local indices)
  std::map<std::string, std::vector<PoiCluster>> per_user;
};

PooledView pool_clusters(const std::vector<UserResult>& users, const PipelineConfig& cfg,
                         const RunOptions& opts) {
  std::vector<StayPoint> pooled;
  std::vector<std::pair<std::string, std::size_t>> origin;  // user, local index
  for (const auto& u : users)
    for (std::size_t i = 0; i < u.stay_points.size(); ++i) {
      pooled.push_back(u.stay_points[i]);
      origin.emplace_back(u.user_id, i);
    }

  PooledView view;
  view.global_clusters = cluster_stay_points(pooled, cfg, opts);
  for (const auto& c : view.global_clusters) {
    std::map<std::string, PoiCluster> split;
    for (std::size_t m : c.members) {
      auto& local = split[origin[m].first];
      local.cluster_id = c.cluster_id;
      local.members.push_back(origin[m].second);
    }
    for (auto& [user, local] : split) view.per_user[user].push_back(std::move(local));
  }
  return view;
}

}  // namespace

RunResult run_pipeline(const std::string& location_file, const std::string& sensor_file,
                       const PipelineConfig& cfg, const std::string& out_dir,
                       const RunOptions& opts) {
  validate(cfg);

  auto loc_read = io::read_location_file(location_file);
  auto sen_read = io::read_sensor_file(sensor_file);
  if (loc_read.samples.empty())
    throw InputError("no usable location data in " + location_file);
  if (sen_read.rows > 0 && sen_read.samples.empty())
    throw InputError("no usable sensor data in " + sensor_file);

  std::map<std::string, std::vector<LocationSample>> loc_by_user;
  for (auto& s : loc_read.samples) loc_by_user[s.user_id].push_back(std::move(s));
  std::map<std::string, std::vector<SensorSample>> sen_by_user;
  for (auto& s : sen_read.samples) sen_by_user[s.user_id].push_back(std::move(s));

  // distinct users are independent: fan the per-user stages out on a pool,
  // keeping results in user_id order so artifacts stay deterministic
  std::vector<std::string> ids;
  std::vector<std::vector<LocationSample>> locs_in;
  std::vector<std::vector<SensorSample>> sens_in;
  for (auto& [user, locs] : loc_by_user) {
    ids.push_back(user);
    locs_in.push_back(std::move(locs));
    auto sens_it = sen_by_user.find(user);
    sens_in.push_back(sens_it != sen_by_user.end() ? std::move(sens_it->second)
                                                   : std::vector<SensorSample>{});
  }

  RunResult result;
  result.users.resize(ids.size());
  for_each_index_parallel(ids.size(), opts.jobs, [&](std::size_t i) {
    if (!opts.pool_users) {
      result.users[i] = process_user(std::move(ids[i]), std::move(locs_in[i]),
                                     std::move(sens_in[i]), cfg, opts);
    } else {
      // stage the per-user work; clustering happens globally below
      UserResult r;
      r.user_id = std::move(ids[i]);
      r.locations = prep::denoise(std::move(locs_in[i]));
      r.sensors = normalize_sensor_noise(prep::denoise(std::move(sens_in[i])), cfg);
      r.stay_points = opts.validation ? staypoint::detect_vspd(r.locations, cfg)
                                      : staypoint::detect_baseline(r.locations, cfg);
      result.users[i] = std::move(r);
    }
  });

  std::size_t cluster_count = 0;
  if (opts.pool_users) {
    PooledView view = pool_clusters(result.users, cfg, opts);
    cluster_count = view.global_clusters.size();
    for (auto& u : result.users) {
      auto it = view.per_user.find(u.user_id);
      if (it != view.per_user.end()) {
        u.clusters = std::move(it->second);
        for (auto& c : u.clusters) {
          double lat = 0.0, lon = 0.0;
          for (std::size_t m : c.members) {
            lat += u.stay_points[m].centroid_lat;
            lon += u.stay_points[m].centroid_lon;
          }
          c.centroid_lat = lat / static_cast<double>(c.members.size());
          c.centroid_lon = lon / static_cast<double>(c.members.size());
        }
      }
      u.trajectory = traj::build_trajectory(u.stay_points, u.clusters, cfg);
      u.slots = prep::time_sync(u.locations, u.sensors, cfg, data_range(u.locations, u.sensors));
      for (const auto& c : u.clusters)
        u.reports.push_back(sfec::classify_poi(c.cluster_id, u.trajectory, u.slots, cfg));
    }
  } else {
    for (const auto& u : result.users) cluster_count += u.clusters.size();
  }

  result.features = collect_features(result.users);

  RunManifest& m = result.manifest;
  m.tool_version = kVersion;
  m.location_digest = io::file_digest(location_file);
  m.sensor_digest = io::file_digest(sensor_file);
  m.location_rows = loc_read.rows;
  m.location_rejected = loc_read.rejects.size();
  m.location_raw = loc_read.samples.size();
  m.sensor_rows = sen_read.rows;
  m.sensor_rejected = sen_read.rejects.size();
  m.sensor_raw = sen_read.samples.size();
  m.config = cfg;
  for (const auto& u : result.users) {
    m.location_dedup += u.locations.size();
    m.sensor_dedup += u.sensors.size();
    m.stay_points += u.stay_points.size();
    m.pois_classified += u.reports.size();
  }
  m.poi_clusters = cluster_count;

  // artifacts
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  std::vector<io::UserStayPoints> sp_out;
  std::vector<io::UserAssignments> as_out;
  std::vector<io::UserTrajectory> tr_out;
  std::vector<io::UserEnvReports> env_out;
  for (const auto& u : result.users) {
    sp_out.push_back({u.user_id, u.stay_points});
    io::UserAssignments as{u.user_id, std::vector<int>(u.stay_points.size(), 0)};
    for (const auto& c : u.clusters)
      for (std::size_t mbr : c.members) as.cluster_ids[mbr] = c.cluster_id;
    as_out.push_back(std::move(as));
    tr_out.push_back({u.user_id, u.trajectory});
    env_out.push_back({u.user_id, u.reports});
  }
  io::write_stay_points_file((dir / "stay_points.tsv").string(), sp_out);
  io::write_assignments_file((dir / "cluster_assignments.tsv").string(), as_out);
  io::write_trajectory_file((dir / "trajectory.tsv").string(), tr_out);
  io::write_env_reports_file((dir / "env_reports.tsv").string(), env_out);
  io::write_geojson_file((dir / "poi_clusters.geojson").string(), result.features);

  if (!loc_read.rejects.empty() || !sen_read.rejects.empty()) {
    const std::string rejects_path = (dir / "rejects.tsv").string();
    io::write_rejects_file(rejects_path, "locations", loc_read.rejects, false);
    io::write_rejects_file(rejects_path, "sensors", sen_read.rejects, true);
  }

  std::ofstream manifest_out(dir / "manifest.tsv");
  if (!manifest_out) throw InputError("cannot create manifest in " + out_dir);
  manifest_out << manifest_to_text(m);

  return result;
}

}  // namespace poikit::pipeline
