#pragma once

#include <string>
#include <vector>

#include "poikit/config.hpp"
#include "poikit/geojson.hpp"
#include "poikit/synth.hpp"
#include "poikit/types.hpp"

namespace poikit::score {

struct Metrics {
  std::size_t truth_count = 0;    // unique ground-truth places
  std::size_t detected_count = 0;
  std::size_t matched = 0;
  double precision = 0.0;     // matched / detected
  double recall = 0.0;        // matched / truth
  double io_accuracy = 0.0;   // over matched pairs with a truth io label
  double pp_accuracy = 0.0;
  double visit_overlap = 0.0; // mean |truth ∩ detected| / |truth| over matches
};

/// Greedy one-to-one matching of detected POIs to ground truth within the
/// same user: closest pairs first, a pair matches when the centroids are
/// within max(2 * theta_l, 400 m). Truth entries for repeated dwells at one
/// place are merged first, since a detected POI covers all of its visits.
/// Unmatched detections count against precision, unmatched places against
/// recall.
Metrics score_run(const std::vector<io::PoiFeature>& detected,
                  const std::vector<synth::GroundTruthPoi>& truth,
                  const PipelineConfig& cfg);

std::string metrics_to_text(const Metrics& m);

}  // namespace poikit::score
