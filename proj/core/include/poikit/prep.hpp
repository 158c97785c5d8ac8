#pragma once

#include <optional>
#include <vector>

#include "poikit/config.hpp"
#include "poikit/types.hpp"

// Preprocessing: duplicate removal, per-user noise normalization, and
// alignment of the location and sensor streams onto a common slot grid.

namespace poikit::prep {

/// Half-open time interval [begin, end).
struct TimeWindow {
  Timestamp begin = 0;
  Timestamp end = 0;
};

/// Linear rescaler mapping a user's raw microphone amplitude onto [0, 10],
/// fitted from the min/max amplitude seen inside `window`.
struct NoiseNormalizer {
  double s_min = 0.0;
  double s_max = 0.0;
  TimeWindow window;
};

/// Sorts by timestamp and keeps exactly one sample per timestamp (the first
/// in input order). Upload retries leave byte-identical rows behind, so
/// dropping later duplicates loses nothing. Output is strictly increasing
/// in t. Idempotent.
std::vector<LocationSample> denoise(std::vector<LocationSample> samples);
std::vector<SensorSample> denoise(std::vector<SensorSample> samples);

/// Fits the normalizer from raw noise readings inside `window`. Throws
/// std::invalid_argument when no sample in the window carries noise data.
NoiseNormalizer fit_noise_normalizer(const std::vector<SensorSample>& samples,
                                     TimeWindow window);

/// 10 * (s - s_min) / (s_max - s_min), clamped into [0, 10]. Readings outside
/// the fitted window may exceed the historical extremes, hence the clamp.
/// A degenerate normalizer (s_max == s_min) maps everything to 0.
double normalize_noise(double s, const NoiseNormalizer& norm);

/// One cell of the slot grid. Aggregates are absent when the slot saw no
/// data of that kind.
struct AlignedSlot {
  Timestamp slot_start = 0;                 // multiple of slot_len
  std::optional<double> mean_accuracy;      // x: mean GPS accuracy in slot
  std::optional<double> mean_noise;         // y: mean normalized noise
  std::optional<int> battery;               // 1 if any sample charged, else 0
  std::optional<int> light_indicator;       // 1 if mean light > th_l, else 0
  std::optional<Activity> activity;         // most frequent label in slot
};

/// Buckets both streams onto the slot_len grid: one AlignedSlot per grid
/// cell intersecting `range`, in ascending order. Inputs must be denoised
/// and sorted. Activity ties break by enum order (Still < Walking < Other).
std::vector<AlignedSlot> time_sync(const std::vector<LocationSample>& locations,
                                   const std::vector<SensorSample>& sensors,
                                   const PipelineConfig& cfg, TimeWindow range);

/// Grid cell index for a timestamp (floor division by slot_len).
std::int64_t slot_index(Timestamp t, std::int64_t slot_len);

}  // namespace poikit::prep
