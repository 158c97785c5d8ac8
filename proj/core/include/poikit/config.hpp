#pragma once

#include <cstdint>
#include <string>

#include "poikit/types.hpp"

namespace poikit {

/// All pipeline thresholds in one place. Defaults are the values the toolkit
/// was tuned with; every one of them can be overridden from a config file or
/// the command line.
struct PipelineConfig {
  double theta_t_min_stay = 1800.0;  // s, minimum dwell duration for a stay point
  double theta_t_gap = 1200.0;       // s, max gap between consecutive samples in a valid segment
  double theta_d_valid = 200.0;      // m, max hop between consecutive samples in a valid segment
  double theta_l_eps_cap = 200.0;    // m, cap on the accuracy-adaptive reachability radius
  double th_g = 30.0;                // m, GPS-accuracy split between indoor and outdoor
  double th_n = 5.0;                 // normalized-noise split between private and public
  double th_l = 1000.0;              // lux, light level counted as daylight
  std::int64_t slot_len = 300;       // s, classification slot length (the sampling interval)
  double earth_radius = 6371000.0;   // m, mean sphere radius
  double label_margin_warn = 10.0;   // percentage points; closer calls are flagged
  std::int64_t noise_window = 30ll * 24 * 3600;  // s, history used to fit the noise normalizer
};

/// Throws ConfigError when any threshold is out of its legal range.
void validate(const PipelineConfig& cfg);

/// Reads `key = value` lines ('#' starts a comment, blank lines skipped).
/// Unknown keys and malformed values throw ConfigError. The result is
/// validated before being returned.
PipelineConfig load_config_file(const std::string& path);

/// Inverse of load_config_file; used for the manifest config snapshot.
std::string config_to_text(const PipelineConfig& cfg);

}  // namespace poikit
