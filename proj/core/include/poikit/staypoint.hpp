#pragma once

#include <vector>

#include "poikit/config.hpp"
#include "poikit/types.hpp"

// Stay-point detection. The validated detector rejects dwell candidates that
// are artifacts of GPS dropout (tunnels, underground, indoor dead zones): a
// frozen fix with a long timestamp gap looks exactly like a dwell to the
// classic scan, so every consecutive sample pair inside a candidate must also
// pass a gap-time / gap-distance check before the segment counts.

namespace poikit::staypoint {

/// Accuracy-adaptive spatial bound for one pair of fixes: the sum of their
/// accuracy radii, capped at theta_l so two poor fixes cannot chain arbitrarily
/// distant points.
double pair_eps(double a_i, double a_prev, double theta_l);

/// Gap check for one consecutive sample pair: the pair is plausible dwell
/// evidence iff dt < theta_t_gap and d < theta_d_valid. A dropout produces one
/// long gap (dt fails); a tracking glitch produces one long hop (d fails).
bool validity(double d, double dt, const PipelineConfig& cfg);

/// Validated stay-point scan. Anchored at k, the segment extends through j
/// while haversine(P_k, P_j) <= pair_eps(a_k, a_j); at the first exceedance
/// (or end of series) the candidate [k, j-1] is kept iff its span exceeds
/// theta_t_min_stay and every consecutive pair inside it passes validity().
/// The scan resumes at j either way, so emitted member ranges are disjoint
/// and ordered. Series shorter than 2 samples yield no stay points.
std::vector<StayPoint> detect_vspd(const std::vector<LocationSample>& samples,
                                   const PipelineConfig& cfg);

/// The classic scan: identical to detect_vspd with the validity check forced
/// to true. Kept for benchmark comparison, not for production use.
std::vector<StayPoint> detect_baseline(const std::vector<LocationSample>& samples,
                                       const PipelineConfig& cfg);

}  // namespace poikit::staypoint
