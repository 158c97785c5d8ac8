#pragma once

#include <array>
#include <vector>

#include "poikit/config.hpp"
#include "poikit/prep.hpp"
#include "poikit/types.hpp"

// Sensor-fusion environment classification (SFEC). Each 5-minute slot of a
// POI visit gets per-category confidence scores fused from GPS accuracy,
// normalized noise, battery state, light and activity; per-POI percentages
// are the slot averages. Categories are encoded 1 = indoor, 2 = outdoor,
// 3 = private, 4 = public.

namespace poikit::sfec {

/// Per-slot confidences, s[c] in [0, 1] for c in 1..4 (index 0 unused).
/// A category score is absent when the slot lacks the driving aggregate or
/// sits on the wrong side of its threshold; at most one of s[1]/s[2] and one
/// of s[3]/s[4] can be present. `unclassified` marks slots with no usable
/// data on either axis.
struct SlotConfidence {
  Timestamp slot_start = 0;
  std::array<std::optional<double>, 5> s;
  bool unclassified = false;
};

/// Scores one aligned slot. With x the slot's mean GPS accuracy, y its mean
/// normalized noise, beta/l the battery and light indicators and alpha_s /
/// alpha_w the still/walking activity flags:
///   s[1] = 0.9 (x - th_g) / th_g + 0.05 (beta + alpha_s)   if x > th_g
///   s[2] = 0.9 (th_g - x) / th_g + 0.1 l                   if x < th_g
///   s[3] = 0.9 (th_n - y) / th_n + 0.1 alpha_s             if y < th_n
///   s[4] = 0.9 (y - th_n) / th_n + 0.1 alpha_w             if y > th_n
/// each clamped into [0, 1]. The threshold comparisons are strict: x == th_g
/// (or y == th_n) yields neither score. Absent indicators contribute 0.
SlotConfidence slot_confidences(const prep::AlignedSlot& slot,
                                const PipelineConfig& cfg);

/// Per-POI percentages, p[c] in [0, 100] (index 0 unused), p0 the percentage
/// of fully unclassified slots.
struct PoiConfidence {
  std::array<std::optional<double>, 5> p;
  double p0 = 0.0;
};

/// Averages slot confidences: p[c] = 100 / n * sum of s[c] over all n slots,
/// where an absent s[c] contributes 0 but still counts toward n. p[c] is
/// absent only when no slot scored category c at all. Throws
/// std::invalid_argument for an empty slot list.
PoiConfidence poi_confidence(const std::vector<SlotConfidence>& slots);

struct LabelEstimate {
  IoLabel io = IoLabel::Unknown;
  PpLabel pp = PpLabel::Unknown;
  bool low_confidence = false;
};

/// Picks the higher percentage on each axis; a category missing its rival
/// wins by default, both missing (or an exact tie) gives Unknown. When both
/// rivals are present and closer than label_margin_warn percentage points,
/// the estimate is flagged low-confidence.
LabelEstimate estimate_labels(const PoiConfidence& confidence,
                              const PipelineConfig& cfg);

/// Full per-POI report: collects the slot grid cells covered by the POI's
/// visits (deduplicated), scores them, averages, and labels.
EnvReport classify_poi(int cluster_id, const std::vector<Visit>& visits,
                       const std::vector<prep::AlignedSlot>& slots,
                       const PipelineConfig& cfg);

}  // namespace poikit::sfec
