#include "poikit/trajectory.hpp"

#include <algorithm>
#include <stdexcept>

namespace poikit::traj {

Trajectory build_trajectory(const std::vector<StayPoint>& stay_points,
                            const std::vector<PoiCluster>& clusters,
                            const PipelineConfig& cfg) {
  std::vector<int> cluster_of(stay_points.size(), 0);
  for (const auto& c : clusters)
    for (std::size_t m : c.members) {
      if (m >= stay_points.size() || cluster_of[m] != 0)
        throw std::invalid_argument("stay points must partition into clusters");
      cluster_of[m] = c.cluster_id;
    }

  Trajectory visits;
  visits.reserve(stay_points.size());
  for (std::size_t i = 0; i < stay_points.size(); ++i) {
    if (cluster_of[i] == 0)
      throw std::invalid_argument("stay point without a cluster assignment");
    visits.push_back({cluster_of[i], stay_points[i].t_arrive, stay_points[i].t_depart});
  }
  std::sort(visits.begin(), visits.end(), [](const Visit& a, const Visit& b) {
    return a.t_arrive < b.t_arrive;
  });

  // collapse same-cluster visits separated by less than one sampling interval
  Trajectory merged;
  for (const auto& v : visits) {
    if (!merged.empty() && merged.back().cluster_id == v.cluster_id &&
        v.t_arrive - merged.back().t_depart < cfg.slot_len) {
      merged.back().t_depart = std::max(merged.back().t_depart, v.t_depart);
    } else {
      merged.push_back(v);
    }
  }
  return merged;
}

Trajectory build_trajectory(const std::vector<StayPoint>& stay_points,
                            const std::vector<int>& cluster_ids,
                            const PipelineConfig& cfg) {
  if (cluster_ids.size() != stay_points.size())
    throw std::invalid_argument("one cluster id per stay point required");
  std::vector<PoiCluster> clusters;
  for (std::size_t i = 0; i < cluster_ids.size(); ++i) {
    auto it = std::find_if(clusters.begin(), clusters.end(), [&](const PoiCluster& c) {
      return c.cluster_id == cluster_ids[i];
    });
    if (it == clusters.end()) {
      clusters.push_back({cluster_ids[i], {i}, 0.0, 0.0});
    } else {
      it->members.push_back(i);
    }
  }
  return build_trajectory(stay_points, clusters, cfg);
}

}  // namespace poikit::traj
