#pragma once

#include <vector>

#include "poikit/config.hpp"
#include "poikit/types.hpp"

namespace poikit::traj {

/// Labels each stay point with its cluster id and returns the time-ordered
/// visit sequence. Consecutive visits to the same cluster separated by less
/// than one slot_len are merged: a gap shorter than the sampling interval
/// cannot evidence a departure. Every stay point must belong to exactly one
/// cluster.
Trajectory build_trajectory(const std::vector<StayPoint>& stay_points,
                            const std::vector<PoiCluster>& clusters,
                            const PipelineConfig& cfg);

/// Same, from a flat assignment table (cluster_ids[i] is stay point i's
/// cluster, as read back from cluster_assignments.tsv).
Trajectory build_trajectory(const std::vector<StayPoint>& stay_points,
                            const std::vector<int>& cluster_ids,
                            const PipelineConfig& cfg);

}  // namespace poikit::traj
