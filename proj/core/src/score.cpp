#include "poikit/score.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

#include "poikit/csv.hpp"
#include "poikit/geo.hpp"

namespace poikit::score {

namespace {

struct CandidatePair {
  double distance;
  std::size_t detected;
  std::size_t truth;
};

double interval_overlap(Timestamp a0, Timestamp a1, Timestamp b0, Timestamp b1) {
  const Timestamp lo = std::max(a0, b0);
  const Timestamp hi = std::min(a1, b1);
  return hi > lo ? static_cast<double>(hi - lo) : 0.0;
}

/// One ground-truth place: repeated dwells at the same spot collapse into a
/// single entry carrying every visit interval, mirroring how a detected POI
/// covers all of its visits.
struct TruthPlace {
  std::string user_id;
  double lat = 0.0;
  double lon = 0.0;
  IoLabel io = IoLabel::Unknown;
  PpLabel pp = PpLabel::Unknown;
  std::vector<std::pair<Timestamp, Timestamp>> visits;
};

std::vector<TruthPlace> merge_truth(const std::vector<synth::GroundTruthPoi>& truth,
                                    const PipelineConfig& cfg) {
  std::vector<TruthPlace> places;
  for (const auto& g : truth) {
    TruthPlace* hit = nullptr;
    for (auto& p : places) {
      if (p.user_id != g.user_id) continue;
      if (geo::haversine_distance({p.lat, p.lon}, {g.lat, g.lon}, cfg.earth_radius) < 1.0)
        hit = &p;
    }
    if (!hit) {
      places.push_back({g.user_id, g.lat, g.lon, g.io, g.pp, {}});
      hit = &places.back();
    }
    hit->visits.emplace_back(g.t_arrive, g.t_depart);
  }
  return places;
}

}  // namespace

Metrics score_run(const std::vector<io::PoiFeature>& detected,
                  const std::vector<synth::GroundTruthPoi>& truth,
                  const PipelineConfig& cfg) {
  Metrics m;
  const std::vector<TruthPlace> places = merge_truth(truth, cfg);
  m.truth_count = places.size();
  m.detected_count = detected.size();

  const double radius = std::max(2.0 * cfg.theta_l_eps_cap, 400.0);

  std::vector<CandidatePair> pairs;
  for (std::size_t d = 0; d < detected.size(); ++d) {
    for (std::size_t g = 0; g < places.size(); ++g) {
      if (detected[d].user_id != places[g].user_id) continue;
      const double dist = geo::haversine_distance(
          {detected[d].centroid_lat, detected[d].centroid_lon},
          {places[g].lat, places[g].lon}, cfg.earth_radius);
      if (dist <= radius) pairs.push_back({dist, d, g});
    }
  }
  // greedy one-to-one, closest pairs first; ties resolved by index order
  std::sort(pairs.begin(), pairs.end(), [](const CandidatePair& a, const CandidatePair& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (a.detected != b.detected) return a.detected < b.detected;
    return a.truth < b.truth;
  });

  std::vector<bool> d_used(detected.size(), false), g_used(places.size(), false);
  std::size_t io_total = 0, io_correct = 0, pp_total = 0, pp_correct = 0;
  double overlap_sum = 0.0;
  for (const auto& p : pairs) {
    if (d_used[p.detected] || g_used[p.truth]) continue;
    d_used[p.detected] = true;
    g_used[p.truth] = true;
    ++m.matched;

    const auto& det = detected[p.detected];
    const auto& tru = places[p.truth];
    if (tru.io != IoLabel::Unknown) {
      ++io_total;
      if (det.report && det.report->io_label == tru.io) ++io_correct;
    }
    if (tru.pp != PpLabel::Unknown) {
      ++pp_total;
      if (det.report && det.report->pp_label == tru.pp) ++pp_correct;
    }
    double truth_span = 0.0, covered = 0.0;
    for (const auto& [arrive, depart] : tru.visits) {
      truth_span += static_cast<double>(depart - arrive);
      covered += interval_overlap(det.first_arrive, det.last_depart, arrive, depart);
    }
    if (truth_span > 0.0) overlap_sum += covered / truth_span;
  }

  m.precision = m.detected_count > 0
                    ? static_cast<double>(m.matched) / static_cast<double>(m.detected_count)
                    : 0.0;
  m.recall = m.truth_count > 0
                 ? static_cast<double>(m.matched) / static_cast<double>(m.truth_count)
                 : 0.0;
  m.io_accuracy = io_total > 0 ? static_cast<double>(io_correct) / static_cast<double>(io_total)
                               : 0.0;
  m.pp_accuracy = pp_total > 0 ? static_cast<double>(pp_correct) / static_cast<double>(pp_total)
                               : 0.0;
  m.visit_overlap = m.matched > 0 ? overlap_sum / static_cast<double>(m.matched) : 0.0;
  return m;
}

std::string metrics_to_text(const Metrics& m) {
  std::ostringstream out;
  out << "truth_count\t" << m.truth_count << "\n"
      << "detected_count\t" << m.detected_count << "\n"
      << "matched\t" << m.matched << "\n"
      << "precision\t" << io::format_fixed(m.precision, 4) << "\n"
      << "recall\t" << io::format_fixed(m.recall, 4) << "\n"
      << "io_accuracy\t" << io::format_fixed(m.io_accuracy, 4) << "\n"
      << "pp_accuracy\t" << io::format_fixed(m.pp_accuracy, 4) << "\n"
      << "visit_overlap\t" << io::format_fixed(m.visit_overlap, 4) << "\n";
  return out.str();
}

}  // namespace poikit::score
