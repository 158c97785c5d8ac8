#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "poikit/types.hpp"

// Flat-file input/output. Sample files are comma-separated with a header
// row; columns are matched by name so optional columns (e.g. noise_norm
// added by `preprocess`) can appear or not. Missing values are empty fields.
// Derived artifacts (stay points, assignments, trajectories, reports) are
// tab-separated with a header. All floating-point fields are written with
// round-trip precision so re-reading an artifact reproduces the values
// bit-exactly.

namespace poikit::io {

struct RowError {
  std::size_t line = 0;  // 1-based, header is line 1
  std::string message;
};

template <typename Sample>
struct ReadResult {
  std::vector<Sample> samples;
  std::vector<RowError> rejects;
  std::size_t rows = 0;  // data rows seen (valid + rejected)
};

/// Throw InputError when the file is missing or the header lacks required
/// columns. Row-level problems land in `rejects`, never throw.
ReadResult<LocationSample> read_location_file(const std::string& path);
ReadResult<SensorSample> read_sensor_file(const std::string& path);

void write_location_file(const std::string& path,
                         const std::vector<LocationSample>& samples);
void write_sensor_file(const std::string& path,
                       const std::vector<SensorSample>& samples);

/// Stay points plus the user's id, as written by `staypoints`/`pipeline`.
struct UserStayPoints {
  std::string user_id;
  std::vector<StayPoint> stay_points;
};

void write_stay_points_file(const std::string& path,
                            const std::vector<UserStayPoints>& users);
std::vector<UserStayPoints> read_stay_points_file(const std::string& path);

/// cluster_ids[i] is the cluster of stay point i within the same user.
struct UserAssignments {
  std::string user_id;
  std::vector<int> cluster_ids;
};

void write_assignments_file(const std::string& path,
                            const std::vector<UserAssignments>& users);
std::vector<UserAssignments> read_assignments_file(const std::string& path);

struct UserTrajectory {
  std::string user_id;
  Trajectory visits;
};

void write_trajectory_file(const std::string& path,
                           const std::vector<UserTrajectory>& users);
std::vector<UserTrajectory> read_trajectory_file(const std::string& path);

struct UserEnvReports {
  std::string user_id;
  std::vector<EnvReport> reports;
};

void write_env_reports_file(const std::string& path,
                            const std::vector<UserEnvReports>& users);
std::vector<UserEnvReports> read_env_reports_file(const std::string& path);

void write_rejects_file(const std::string& path, const std::string& source,
                        const std::vector<RowError>& rejects, bool append = false);

/// FNV-1a 64-bit digest of a file's bytes, as "fnv1a64:<hex>". Deterministic,
/// good enough to fingerprint inputs in the run manifest.
std::string file_digest(const std::string& path);

// Formatting/parsing helpers shared by all writers and readers.
std::string format_double(double v);        // round-trip precision (%.17g)
std::string format_fixed(double v, int places);
std::vector<std::string> split_fields(const std::string& line, char delim);
std::optional<double> parse_double_field(const std::string& s);       // finite only
std::optional<std::int64_t> parse_int_field(const std::string& s);

}  // namespace poikit::io
