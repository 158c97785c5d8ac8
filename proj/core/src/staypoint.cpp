#include "poikit/staypoint.hpp"

#include <cmath>

#include "poikit/geo.hpp"

namespace poikit::staypoint {

namespace {

StayPoint make_stay_point(const std::vector<LocationSample>& samples,
                          std::size_t begin, std::size_t end) {
  double lat_sum = 0.0, lon_sum = 0.0, acc_sum = 0.0;
  for (std::size_t i = begin; i <= end; ++i) {
    lat_sum += samples[i].lat;
    lon_sum += samples[i].lon;
    acc_sum += samples[i].accuracy;
  }
  const double n = static_cast<double>(end - begin + 1);
  return StayPoint{lat_sum / n, lon_sum / n, samples[begin].t, samples[end].t,
                   acc_sum / n,  begin,      end};
}

bool segment_valid(const std::vector<LocationSample>& samples, std::size_t begin,
                   std::size_t end, const PipelineConfig& cfg) {
  for (std::size_t i = begin; i < end; ++i) {
    const double d = geo::haversine_distance({samples[i].lat, samples[i].lon},
                                             {samples[i + 1].lat, samples[i + 1].lon},
                                             cfg.earth_radius);
    const double dt = static_cast<double>(samples[i + 1].t - samples[i].t);
    if (!validity(d, dt, cfg)) return false;
  }
  return true;
}

std::vector<StayPoint> detect(const std::vector<LocationSample>& samples,
                              const PipelineConfig& cfg, bool validated) {
  std::vector<StayPoint> result;
  const std::size_t n = samples.size();
  if (n < 2) return result;

  std::size_t k = 0;
  while (k < n) {
    const geo::GeoPoint anchor{samples[k].lat, samples[k].lon};
    std::size_t j = k + 1;
    while (j < n) {
      const double bound = pair_eps(samples[k].accuracy, samples[j].accuracy,
                                    cfg.theta_l_eps_cap);
      const double d = geo::haversine_distance(
          anchor, {samples[j].lat, samples[j].lon}, cfg.earth_radius);
      if (d > bound) break;
      ++j;
    }
    // candidate segment [k, j-1]; a segment cut off by end-of-series still counts
    const std::size_t end = j - 1;
    if (end > k) {
      const double span = static_cast<double>(samples[end].t - samples[k].t);
      if (span > cfg.theta_t_min_stay &&
          (!validated || segment_valid(samples, k, end, cfg))) {
        result.push_back(make_stay_point(samples, k, end));
      }
    }
    k = j;  // resume past the candidate whether or not it was kept
  }
  return result;
}

}  // namespace

double pair_eps(double a_i, double a_prev, double theta_l) {
  const double sum = a_i + a_prev;
  return sum < theta_l ? sum : theta_l;
}

bool validity(double d, double dt, const PipelineConfig& cfg) {
  return dt < cfg.theta_t_gap && d < cfg.theta_d_valid;
}

std::vector<StayPoint> detect_vspd(const std::vector<LocationSample>& samples,
                                   const PipelineConfig& cfg) {
  return detect(samples, cfg, true);
}

std::vector<StayPoint> detect_baseline(const std::vector<LocationSample>& samples,
                                       const PipelineConfig& cfg) {
  return detect(samples, cfg, false);
}

}  // namespace poikit::staypoint
