#pragma once

#include <optional>
#include <vector>

#include "ttlab/core/types.hpp"

namespace ttlab::tracking {

inline constexpr double kTrackingMatchDistance = 0.05;

struct TimedPoint {
    double t = 0.0;
    Vec3 p = Vec3::Zero();
};

struct TrackingScore {
    double precision = 0.0;  ///< 0 when there are no estimates
    double recall = 0.0;
    int true_positives = 0;
};

/// Frame-wise scoring: an estimate is a true positive when a truth sample
/// with the same timestamp (within 1e-9 s) lies closer than 5 cm.
/// Throws InvalidArgument on empty truth.
TrackingScore evaluate_tracking(const std::vector<TimedPoint>& estimates, const std::vector<TimedPoint>& truth);

}  // namespace ttlab::tracking
