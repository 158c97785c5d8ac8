#pragma once

#include <optional>
#include <string>
#include <vector>

#include "poikit/types.hpp"

namespace poikit::io {

/// One POI cluster flattened for export: centroid geometry plus the
/// properties reports and scoring need. `report` is absent when the run did
/// not classify (bare `cluster` subcommand).
struct PoiFeature {
  std::string user_id;
  int cluster_id = 0;
  std::size_t member_count = 0;
  double centroid_lat = 0.0;
  double centroid_lon = 0.0;
  Timestamp first_arrive = 0;
  Timestamp last_depart = 0;
  std::optional<EnvReport> report;
};

/// Serializes features as a GeoJSON FeatureCollection of Point features
/// (coordinates [lon, lat]). Property keys: user_id, cluster_id,
/// member_count, first_arrive, last_depart and, when classified, io_label,
/// pp_label, P1..P4 (absent percentages omitted) and P0. Key order is fixed
/// so identical runs serialize byte-identically.
std::string to_geojson(const std::vector<PoiFeature>& features);

void write_geojson_file(const std::string& path,
                        const std::vector<PoiFeature>& features);

/// Parses a FeatureCollection written by to_geojson. Throws InputError on
/// malformed input.
std::vector<PoiFeature> read_geojson_file(const std::string& path);

}  // namespace poikit::io
