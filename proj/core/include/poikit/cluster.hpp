#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "poikit/config.hpp"
#include "poikit/types.hpp"

// Groups stay points into POI clusters. The production method is DBSCAN under
// an accuracy-adaptive reachability radius with minPts = 1 (no point is
// treated as an outlier); k-means with Davies-Bouldin k selection and
// single-linkage agglomerative clustering are kept as comparison baselines.

namespace poikit::cluster {

/// Reachability between stay points i and j: centroid haversine distance
/// <= min(mean_accuracy_i + mean_accuracy_j, theta_l).
struct ReachabilityGraph {
  std::size_t node_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j, no self loops
};

ReachabilityGraph build_reachability_graph(const std::vector<StayPoint>& stay_points,
                                           const PipelineConfig& cfg);

/// DBSCAN over the reachability graph. With min_pts = 1 every point is core,
/// so clusters are exactly the connected components. Cluster ids are assigned
/// 1..K in order of earliest member t_arrive; every stay point is assigned.
/// min_pts > 1 is available for experiments; points left unassigned by the
/// density rule then become their own singleton clusters.
std::vector<PoiCluster> dbscan_poi(const std::vector<StayPoint>& stay_points,
                                   const PipelineConfig& cfg, int min_pts = 1);

/// k-means baseline on raw (lat, lon), k selected over 2..k_max by the
/// Davies-Bouldin index. Initialization is deterministic farthest-point
/// seeding, so results are reproducible. Throws std::invalid_argument for
/// fewer than 2 stay points; a fully degenerate input (all points identical)
/// collapses to a single cluster.
std::vector<PoiCluster> kmeans_poi(const std::vector<StayPoint>& stay_points,
                                   int k_max, const PipelineConfig& cfg);

/// One k-means run at a fixed k (same deterministic seeding); empty clusters
/// are dropped, so fewer than k clusters can come back.
std::vector<PoiCluster> kmeans_fixed_k(const std::vector<StayPoint>& stay_points,
                                       int k, const PipelineConfig& cfg);

/// Single-linkage agglomerative baseline under haversine distance. Merging
/// stops once the closest pair of clusters is at distance >= cut_distance,
/// i.e. the dendrogram is cut at cut_distance. Merge order is deterministic
/// (ties go to the lowest index pair).
std::vector<PoiCluster> hierarchical_poi(const std::vector<StayPoint>& stay_points,
                                         double cut_distance,
                                         const PipelineConfig& cfg);

/// Davies-Bouldin index of a clustering: mean over clusters of the worst
/// (sigma_i + sigma_j) / d(c_i, c_j) ratio, with sigma the mean member-to-
/// centroid haversine distance and d the centroid separation. Lower is better.
double davies_bouldin_index(const std::vector<StayPoint>& stay_points,
                            const std::vector<PoiCluster>& clusters,
                            const PipelineConfig& cfg);

}  // namespace poikit::cluster
