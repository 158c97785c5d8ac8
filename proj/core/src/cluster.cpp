#include "poikit/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "poikit/geo.hpp"
#include "poikit/staypoint.hpp"

namespace poikit::cluster {

namespace {

geo::GeoPoint centroid_of(const StayPoint& sp) {
  return {sp.centroid_lat, sp.centroid_lon};
}

/// Orders member sets into PoiClusters: ids 1..K by earliest member arrival
/// (ties by lowest member index), members ascending, centroid = mean.
std::vector<PoiCluster> assemble_clusters(const std::vector<StayPoint>& stay_points,
                                          std::vector<std::vector<std::size_t>> member_sets) {
  for (auto& members : member_sets) std::sort(members.begin(), members.end());

  std::sort(member_sets.begin(), member_sets.end(),
            [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
              Timestamp ta = stay_points[a.front()].t_arrive;
              Timestamp tb = stay_points[b.front()].t_arrive;
              for (std::size_t m : a) ta = std::min(ta, stay_points[m].t_arrive);
              for (std::size_t m : b) tb = std::min(tb, stay_points[m].t_arrive);
              if (ta != tb) return ta < tb;
              return a.front() < b.front();
            });

  std::vector<PoiCluster> clusters;
  clusters.reserve(member_sets.size());
  int next_id = 1;
  for (auto& members : member_sets) {
    PoiCluster c;
    c.cluster_id = next_id++;
    double lat_sum = 0.0, lon_sum = 0.0;
    for (std::size_t m : members) {
      lat_sum += stay_points[m].centroid_lat;
      lon_sum += stay_points[m].centroid_lon;
    }
    const double n = static_cast<double>(members.size());
    c.centroid_lat = lat_sum / n;
    c.centroid_lon = lon_sum / n;
    c.members = std::move(members);
    clusters.push_back(std::move(c));
  }
  return clusters;
}

}  // namespace

ReachabilityGraph build_reachability_graph(const std::vector<StayPoint>& stay_points,
                                           const PipelineConfig& cfg) {
  ReachabilityGraph g;
  g.node_count = stay_points.size();
  for (std::size_t i = 0; i < stay_points.size(); ++i) {
    for (std::size_t j = i + 1; j < stay_points.size(); ++j) {
      const double eps = staypoint::pair_eps(stay_points[i].mean_accuracy,
                                             stay_points[j].mean_accuracy,
                                             cfg.theta_l_eps_cap);
      const double d = geo::haversine_distance(centroid_of(stay_points[i]),
                                               centroid_of(stay_points[j]),
                                               cfg.earth_radius);
      if (d <= eps) g.edges.emplace_back(i, j);
    }
  }
  return g;
}

std::vector<PoiCluster> dbscan_poi(const std::vector<StayPoint>& stay_points,
                                   const PipelineConfig& cfg, int min_pts) {
  const std::size_t n = stay_points.size();
  if (n == 0) return {};

  const ReachabilityGraph graph = build_reachability_graph(stay_points, cfg);
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [i, j] : graph.edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }

  constexpr int kUnvisited = -1;
  constexpr int kNoise = -2;
  std::vector<int> label(n, kUnvisited);
  // a point's neighborhood includes itself
  auto is_core = [&](std::size_t p) {
    return adj[p].size() + 1 >= static_cast<std::size_t>(min_pts);
  };

  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] != kUnvisited) continue;
    if (!is_core(i)) {
      label[i] = kNoise;
      continue;
    }
    const int cid = next++;
    label[i] = cid;
    std::vector<std::size_t> queue(adj[i].begin(), adj[i].end());
    while (!queue.empty()) {
      const std::size_t q = queue.back();
      queue.pop_back();
      if (label[q] == kNoise) label[q] = cid;  // noise becomes a border point
      if (label[q] != kUnvisited) continue;
      label[q] = cid;
      if (is_core(q)) queue.insert(queue.end(), adj[q].begin(), adj[q].end());
    }
  }

  std::vector<std::vector<std::size_t>> member_sets(static_cast<std::size_t>(next));
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] == kNoise) {
      // min_pts experiments only; with min_pts = 1 nothing lands here
      member_sets.push_back({i});
    } else {
      member_sets[static_cast<std::size_t>(label[i])].push_back(i);
    }
  }
  return assemble_clusters(stay_points, std::move(member_sets));
}

double davies_bouldin_index(const std::vector<StayPoint>& stay_points,
                            const std::vector<PoiCluster>& clusters,
                            const PipelineConfig& cfg) {
  const std::size_t k = clusters.size();
  if (k < 2) return std::numeric_limits<double>::infinity();

  std::vector<double> sigma(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const geo::GeoPoint ci{clusters[i].centroid_lat, clusters[i].centroid_lon};
    double sum = 0.0;
    for (std::size_t m : clusters[i].members)
      sum += geo::haversine_distance(centroid_of(stay_points[m]), ci, cfg.earth_radius);
    sigma[i] = sum / static_cast<double>(clusters[i].members.size());
  }

  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double d = geo::haversine_distance(
          {clusters[i].centroid_lat, clusters[i].centroid_lon},
          {clusters[j].centroid_lat, clusters[j].centroid_lon}, cfg.earth_radius);
      const double ratio = d > 0.0 ? (sigma[i] + sigma[j]) / d
                                   : std::numeric_limits<double>::infinity();
      worst = std::max(worst, ratio);
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

namespace {

struct FlatPoint {
  double lat, lon;
};

double sq_dist(const FlatPoint& a, const FlatPoint& b) {
  const double dx = a.lat - b.lat;
  const double dy = a.lon - b.lon;
  return dx * dx + dy * dy;
}

/// Lloyd iterations with deterministic farthest-point seeding. Returns the
/// per-point assignment; empty clusters are dropped by the caller.
std::vector<int> lloyd(const std::vector<FlatPoint>& points, int k) {
  const std::size_t n = points.size();
  std::vector<FlatPoint> centers;
  centers.push_back(points[0]);
  while (centers.size() < static_cast<std::size_t>(k)) {
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& c : centers) nearest = std::min(nearest, sq_dist(points[i], c));
      if (nearest > far_d) {  // strict keeps the lowest index on ties
        far_d = nearest;
        far = i;
      }
    }
    centers.push_back(points[far]);
  }

  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = sq_dist(points[i], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    std::vector<double> lat_sum(centers.size(), 0.0), lon_sum(centers.size(), 0.0);
    std::vector<std::size_t> count(centers.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      lat_sum[static_cast<std::size_t>(assign[i])] += points[i].lat;
      lon_sum[static_cast<std::size_t>(assign[i])] += points[i].lon;
      ++count[static_cast<std::size_t>(assign[i])];
    }
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (count[c] == 0) continue;  // stranded center keeps its position
      centers[c] = {lat_sum[c] / static_cast<double>(count[c]),
                    lon_sum[c] / static_cast<double>(count[c])};
    }
  }
  return assign;
}

std::vector<std::vector<std::size_t>> assignment_to_sets(const std::vector<int>& assign,
                                                         int k) {
  std::vector<std::vector<std::size_t>> sets(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < assign.size(); ++i)
    sets[static_cast<std::size_t>(assign[i])].push_back(i);
  std::erase_if(sets, [](const auto& s) { return s.empty(); });
  return sets;
}

}  // namespace

std::vector<PoiCluster> kmeans_fixed_k(const std::vector<StayPoint>& stay_points,
                                       int k, const PipelineConfig& cfg) {
  (void)cfg;
  const std::size_t n = stay_points.size();
  if (n == 0) return {};
  std::vector<FlatPoint> points;
  points.reserve(n);
  for (const auto& sp : stay_points) points.push_back({sp.centroid_lat, sp.centroid_lon});
  const int kk = std::clamp<int>(k, 1, static_cast<int>(n));
  return assemble_clusters(stay_points, assignment_to_sets(lloyd(points, kk), kk));
}

std::vector<PoiCluster> kmeans_poi(const std::vector<StayPoint>& stay_points,
                                   int k_max, const PipelineConfig& cfg) {
  const std::size_t n = stay_points.size();
  if (n < 2) throw std::invalid_argument("kmeans_poi needs at least 2 stay points");

  std::vector<FlatPoint> points;
  points.reserve(n);
  for (const auto& sp : stay_points) points.push_back({sp.centroid_lat, sp.centroid_lon});

  const bool all_identical = std::all_of(points.begin(), points.end(), [&](const FlatPoint& p) {
    return p.lat == points[0].lat && p.lon == points[0].lon;
  });

  const int hi = std::min<int>(k_max, static_cast<int>(n) - 1);
  std::vector<std::vector<std::size_t>> best_sets;
  double best_db = std::numeric_limits<double>::infinity();
  if (!all_identical) {
    for (int k = 2; k <= hi; ++k) {
      auto sets = assignment_to_sets(lloyd(points, k), k);
      if (sets.size() < 2) continue;
      auto clusters = assemble_clusters(stay_points, sets);
      const double db = davies_bouldin_index(stay_points, clusters, cfg);
      if (db < best_db) {  // strict keeps the smallest k on ties
        best_db = db;
        best_sets = std::move(sets);
      }
    }
  }

  if (best_sets.empty()) {
    // nothing separable: one cluster holding everything
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    best_sets.push_back(std::move(all));
  }
  return assemble_clusters(stay_points, std::move(best_sets));
}

std::vector<PoiCluster> hierarchical_poi(const std::vector<StayPoint>& stay_points,
                                         double cut_distance,
                                         const PipelineConfig& cfg) {
  const std::size_t n = stay_points.size();
  if (n == 0) return {};

  // single linkage via Lance-Williams updates on a dense distance matrix
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dist[i][j] = dist[j][i] = geo::haversine_distance(
          centroid_of(stay_points[i]), centroid_of(stay_points[j]), cfg.earth_radius);

  std::vector<bool> active(n, true);
  std::vector<std::vector<std::size_t>> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};

  while (true) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = n, bj = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        if (dist[i][j] < best) {  // strict < makes ties pick the lowest (i, j)
          best = dist[i][j];
          bi = i;
          bj = j;
        }
      }
    }
    if (bi == n || best >= cut_distance) break;

    members[bi].insert(members[bi].end(), members[bj].begin(), members[bj].end());
    members[bj].clear();
    active[bj] = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == bi) continue;
      const double d = std::min(dist[bi][k], dist[bj][k]);
      dist[bi][k] = dist[k][bi] = d;
    }
  }

  std::vector<std::vector<std::size_t>> sets;
  for (std::size_t i = 0; i < n; ++i)
    if (active[i]) sets.push_back(std::move(members[i]));
  return assemble_clusters(stay_points, std::move(sets));
}

}  // namespace poikit::cluster
