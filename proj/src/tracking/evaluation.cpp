#include "ttlab/tracking/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "ttlab/core/errors.hpp"

namespace ttlab::tracking {

TrackingScore evaluate_tracking(const std::vector<TimedPoint>& estimates, const std::vector<TimedPoint>& truth) {
    if (truth.empty()) throw InvalidArgument("evaluate_tracking: truth sequence is empty");
    std::vector<TimedPoint> sorted = truth;
    std::sort(sorted.begin(), sorted.end(), [](const TimedPoint& a, const TimedPoint& b) { return a.t < b.t; });
    TrackingScore s;
    std::vector<bool> matched(sorted.size(), false);
    for (const auto& e : estimates) {
        auto it = std::lower_bound(sorted.begin(), sorted.end(), e.t - 1e-9,
                                   [](const TimedPoint& a, double t) { return a.t < t; });
        if (it == sorted.end() || std::abs(it->t - e.t) > 1e-9) continue;
        const auto i = static_cast<std::size_t>(it - sorted.begin());
        if (!matched[i] && (e.p - it->p).norm() < kTrackingMatchDistance) {
            matched[i] = true;
            ++s.true_positives;
        }
    }
    s.recall = static_cast<double>(s.true_positives) / static_cast<double>(sorted.size());
    s.precision = estimates.empty() ? 0.0 : static_cast<double>(s.true_positives) / static_cast<double>(estimates.size());
    return s;
}

}  // namespace ttlab::tracking
