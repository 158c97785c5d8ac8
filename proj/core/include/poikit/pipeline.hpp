#pragma once

#include <string>
#include <vector>

#include "poikit/config.hpp"
#include "poikit/csv.hpp"
#include "poikit/geojson.hpp"
#include "poikit/prep.hpp"
#include "poikit/types.hpp"

// End-to-end orchestration: preprocess -> stay points -> clusters ->
// trajectory -> slot alignment -> classification, once per user, plus the
// artifact writers. Everything is deterministic for fixed inputs and config.

namespace poikit::pipeline {

struct RunOptions {
  bool validation = true;       // false switches to the baseline detector
  bool pool_users = false;      // cluster stay points across users
  std::string method = "dbscan";  // dbscan | kmeans | hierarchical
  double cut_distance = 200.0;  // hierarchical only
  int k_max = 8;                // kmeans only
  int jobs = 0;                 // worker threads across users; 0 = one per core
};

/// Per-stage record counts and input fingerprints. Counts are monotone:
/// deduplicated <= raw, stay points <= deduplicated locations.
struct RunManifest {
  std::string tool_version;
  std::string location_digest;
  std::string sensor_digest;
  std::size_t location_rows = 0;       // data rows in the file
  std::size_t location_rejected = 0;
  std::size_t location_raw = 0;        // parsed samples
  std::size_t location_dedup = 0;
  std::size_t sensor_rows = 0;
  std::size_t sensor_rejected = 0;
  std::size_t sensor_raw = 0;
  std::size_t sensor_dedup = 0;
  std::size_t stay_points = 0;
  std::size_t poi_clusters = 0;
  std::size_t pois_classified = 0;
  PipelineConfig config;
};

std::string manifest_to_text(const RunManifest& m);

/// One user's results, in memory.
struct UserResult {
  std::string user_id;
  std::vector<LocationSample> locations;   // deduplicated
  std::vector<SensorSample> sensors;       // deduplicated, noise normalized
  std::vector<StayPoint> stay_points;
  std::vector<PoiCluster> clusters;
  Trajectory trajectory;
  std::vector<prep::AlignedSlot> slots;
  std::vector<EnvReport> reports;
};

/// Runs every stage for one user's denoised streams.
UserResult process_user(std::string user_id, std::vector<LocationSample> locations,
                        std::vector<SensorSample> sensors, const PipelineConfig& cfg,
                        const RunOptions& opts);

/// denoise + noise normalization over the trailing history window, as run by
/// the preprocess stage.
std::vector<SensorSample> preprocess_sensors(std::vector<SensorSample> sensors,
                                             const PipelineConfig& cfg);

struct RunResult {
  RunManifest manifest;
  std::vector<UserResult> users;
  std::vector<io::PoiFeature> features;
};

/// Full batch run. Reads both input files, processes users in user_id order,
/// and writes stay_points.tsv, cluster_assignments.tsv, poi_clusters.geojson,
/// trajectory.tsv, env_reports.tsv, manifest.tsv and (when rows were
/// rejected) rejects.tsv under out_dir. Throws InputError when a file is
/// missing or no location row is usable.
RunResult run_pipeline(const std::string& location_file, const std::string& sensor_file,
                       const PipelineConfig& cfg, const std::string& out_dir,
                       const RunOptions& opts = {});

/// Flattens per-user clusters (+ optional reports) into exportable features.
std::vector<io::PoiFeature> collect_features(const std::vector<UserResult>& users);

}  // namespace poikit::pipeline
