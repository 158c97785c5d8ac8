#include "poikit/prep.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace poikit::prep {

namespace {

// Stable sort + keep-first gives a deterministic pick among duplicated
// timestamps regardless of input order of the rest.
template <typename Sample>
std::vector<Sample> denoise_impl(std::vector<Sample> samples) {
  std::stable_sort(samples.begin(), samples.end(),
                   [](const Sample& a, const Sample& b) { return a.t < b.t; });
  auto last = std::unique(samples.begin(), samples.end(),
                          [](const Sample& a, const Sample& b) { return a.t == b.t; });
  samples.erase(last, samples.end());
  return samples;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

std::vector<LocationSample> denoise(std::vector<LocationSample> samples) {
  return denoise_impl(std::move(samples));
}

std::vector<SensorSample> denoise(std::vector<SensorSample> samples) {
  return denoise_impl(std::move(samples));
}

NoiseNormalizer fit_noise_normalizer(const std::vector<SensorSample>& samples,
                                     TimeWindow window) {
  bool seen = false;
  double lo = 0.0, hi = 0.0;
  for (const auto& s : samples) {
    if (s.t < window.begin || s.t >= window.end || !s.noise_raw) continue;
    const double v = *s.noise_raw;
    if (!seen) {
      lo = hi = v;
      seen = true;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!seen) throw std::invalid_argument("no noise data in window");
  return NoiseNormalizer{lo, hi, window};
}

double normalize_noise(double s, const NoiseNormalizer& norm) {
  const double span = norm.s_max - norm.s_min;
  // a constant noise floor carries no loudness information
  if (span <= 0.0) return 0.0;
  // ratio first: the endpoints then scale to exactly 0 and 10
  return std::clamp(10.0 * ((s - norm.s_min) / span), 0.0, 10.0);
}

std::int64_t slot_index(Timestamp t, std::int64_t slot_len) {
  return floor_div(t, slot_len);
}

std::vector<AlignedSlot> time_sync(const std::vector<LocationSample>& locations,
                                   const std::vector<SensorSample>& sensors,
                                   const PipelineConfig& cfg, TimeWindow range) {
  std::vector<AlignedSlot> slots;
  if (range.end <= range.begin) return slots;

  const std::int64_t len = cfg.slot_len;
  const std::int64_t first = slot_index(range.begin, len);
  const std::int64_t last = slot_index(range.end - 1, len);
  slots.reserve(static_cast<std::size_t>(last - first + 1));

  std::size_t li = 0, si = 0;
  for (std::int64_t cell = first; cell <= last; ++cell) {
    AlignedSlot slot;
    slot.slot_start = cell * len;
    const Timestamp hi = slot.slot_start + len;

    double acc_sum = 0.0;
    std::size_t acc_n = 0;
    while (li < locations.size() && locations[li].t < hi) {
      if (locations[li].t >= slot.slot_start) {
        acc_sum += locations[li].accuracy;
        ++acc_n;
      }
      ++li;
    }
    if (acc_n > 0) slot.mean_accuracy = acc_sum / static_cast<double>(acc_n);

    double noise_sum = 0.0, light_sum = 0.0;
    std::size_t noise_n = 0, light_n = 0, batt_n = 0;
    bool any_charging = false;
    std::array<std::size_t, 3> act_count{0, 0, 0};
    while (si < sensors.size() && sensors[si].t < hi) {
      const auto& s = sensors[si];
      if (s.t >= slot.slot_start) {
        if (s.noise_norm) {
          noise_sum += *s.noise_norm;
          ++noise_n;
        }
        if (s.battery_charging) {
          ++batt_n;
          any_charging = any_charging || *s.battery_charging == 1;
        }
        if (s.light) {
          light_sum += *s.light;
          ++light_n;
        }
        if (s.activity) ++act_count[static_cast<std::size_t>(*s.activity)];
      }
      ++si;
    }
    if (noise_n > 0) slot.mean_noise = noise_sum / static_cast<double>(noise_n);
    if (batt_n > 0) slot.battery = any_charging ? 1 : 0;
    if (light_n > 0)
      slot.light_indicator = (light_sum / static_cast<double>(light_n) > cfg.th_l) ? 1 : 0;
    if (act_count[0] + act_count[1] + act_count[2] > 0) {
      // argmax with ties resolved by enum order
      std::size_t best = 0;
      for (std::size_t a = 1; a < act_count.size(); ++a)
        if (act_count[a] > act_count[best]) best = a;
      slot.activity = static_cast<Activity>(best);
    }

    slots.push_back(slot);
  }
  return slots;
}

}  // namespace poikit::prep
