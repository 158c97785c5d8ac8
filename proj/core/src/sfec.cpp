#include "poikit/sfec.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace poikit::sfec {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

SlotConfidence slot_confidences(const prep::AlignedSlot& slot,
                                const PipelineConfig& cfg) {
  SlotConfidence out;
  out.slot_start = slot.slot_start;

  const double beta = slot.battery.value_or(0);
  const double light = slot.light_indicator.value_or(0);
  const double alpha_s = (slot.activity && *slot.activity == Activity::Still) ? 1.0 : 0.0;
  const double alpha_w = (slot.activity && *slot.activity == Activity::Walking) ? 1.0 : 0.0;

  if (slot.mean_accuracy) {
    const double x = *slot.mean_accuracy;
    // strict comparisons: a slot sitting exactly on the threshold scores neither side
    if (x > cfg.th_g) {
      out.s[1] = clamp01((x - cfg.th_g) / cfg.th_g * 0.9 + (beta + alpha_s) * 0.05);
    } else if (x < cfg.th_g) {
      out.s[2] = clamp01((cfg.th_g - x) / cfg.th_g * 0.9 + light * 0.1);
    }
  }
  if (slot.mean_noise) {
    const double y = *slot.mean_noise;
    if (y < cfg.th_n) {
      out.s[3] = clamp01((cfg.th_n - y) / cfg.th_n * 0.9 + alpha_s * 0.1);
    } else if (y > cfg.th_n) {
      out.s[4] = clamp01((y - cfg.th_n) / cfg.th_n * 0.9 + alpha_w * 0.1);
    }
  }

  out.unclassified = !slot.mean_accuracy && !slot.mean_noise;
  return out;
}

PoiConfidence poi_confidence(const std::vector<SlotConfidence>& slots) {
  if (slots.empty()) throw std::invalid_argument("POI has no slots to average");

  PoiConfidence out;
  const double n = static_cast<double>(slots.size());
  std::size_t unclassified = 0;
  for (int c = 1; c <= 4; ++c) {
    double sum = 0.0;
    bool any = false;
    for (const auto& slot : slots) {
      if (slot.s[static_cast<std::size_t>(c)]) {
        sum += *slot.s[static_cast<std::size_t>(c)];
        any = true;
      }
      // an absent score contributes 0 but the slot still counts toward n
    }
    if (any) out.p[static_cast<std::size_t>(c)] = 100.0 * sum / n;
  }
  for (const auto& slot : slots)
    if (slot.unclassified) ++unclassified;
  out.p0 = 100.0 * static_cast<double>(unclassified) / n;
  return out;
}

LabelEstimate estimate_labels(const PoiConfidence& confidence,
                              const PipelineConfig& cfg) {
  LabelEstimate out;
  const auto& p = confidence.p;

  if (p[1] && (!p[2] || *p[1] > *p[2])) {
    out.io = IoLabel::Indoor;
  } else if (p[2] && (!p[1] || *p[2] > *p[1])) {
    out.io = IoLabel::Outdoor;
  }  // both absent, or an exact tie: Unknown

  if (p[3] && (!p[4] || *p[3] > *p[4])) {
    out.pp = PpLabel::Private;
  } else if (p[4] && (!p[3] || *p[4] > *p[3])) {
    out.pp = PpLabel::Public;
  }

  const bool io_close = p[1] && p[2] && std::abs(*p[1] - *p[2]) < cfg.label_margin_warn;
  const bool pp_close = p[3] && p[4] && std::abs(*p[3] - *p[4]) < cfg.label_margin_warn;
  out.low_confidence = io_close || pp_close;
  return out;
}

EnvReport classify_poi(int cluster_id, const std::vector<Visit>& visits,
                       const std::vector<prep::AlignedSlot>& slots,
                       const PipelineConfig& cfg) {
  // slot grid cells covered by this POI's visits, deduplicated: adjacent
  // visits can share a boundary cell
  std::set<std::int64_t> cells;
  for (const auto& v : visits) {
    if (v.cluster_id != cluster_id) continue;
    const std::int64_t first = prep::slot_index(v.t_arrive, cfg.slot_len);
    const std::int64_t last = prep::slot_index(v.t_depart, cfg.slot_len);
    for (std::int64_t c = first; c <= last; ++c) cells.insert(c);
  }

  std::vector<SlotConfidence> confidences;
  confidences.reserve(cells.size());
  for (const auto& slot : slots) {
    if (cells.count(prep::slot_index(slot.slot_start, cfg.slot_len)))
      confidences.push_back(slot_confidences(slot, cfg));
  }

  EnvReport report;
  report.poi_cluster_id = cluster_id;
  report.n_slots = confidences.size();
  if (confidences.empty()) return report;  // no slot coverage: everything Unknown

  const PoiConfidence pc = poi_confidence(confidences);
  report.p1 = pc.p[1];
  report.p2 = pc.p[2];
  report.p3 = pc.p[3];
  report.p4 = pc.p[4];
  report.p0 = pc.p0;

  const LabelEstimate labels = estimate_labels(pc, cfg);
  report.io_label = labels.io;
  report.pp_label = labels.pp;
  report.low_confidence = labels.low_confidence;
  return report;
}

}  // namespace poikit::sfec
