#pragma once

#include <optional>

#include "ttlab/core/types.hpp"

namespace ttlab::tracking {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

enum class TrackStatus { tentative, active, terminated };

struct TrackState {
    Vec6 mean = Vec6::Zero();  ///< position (m), velocity (m/s)
    Mat6 covariance = Mat6::Identity();
    double last_update = 0.0;
    TrackStatus status = TrackStatus::tentative;
    int consecutive_hits = 0;
    int consecutive_misses = 0;
    bool last_accepted = false;  ///< whether the latest measurement passed the gate
};

struct KalmanParams {
    double process_noise = 1.0;      ///< q; velocity variance grows by q^2 dt
    double measurement_noise = 0.01; ///< r, per-axis stddev in m
    double gate = 9.0;               ///< threshold on the squared Mahalanobis distance
    double initial_velocity_std = 10.0;
    int confirm_hits = 3;
    int max_misses = 10;
};

/// New tentative track at a first measurement with unknown velocity.
TrackState init_track(const Vec3& position, double t, const KalmanParams& params = {});

/// Predicts to time t with a constant-velocity model under gravity, then, if
/// a measurement is given and passes the gate, applies a Joseph-form update.
/// Throws InvalidArgument if t precedes the last update or the input
/// covariance is not symmetric positive definite.
TrackState kalman_step(const TrackState& track, const std::optional<Vec3>& measurement, double t,
                       const KalmanParams& params = {});

bool is_spd(const Mat6& m);

}  // namespace ttlab::tracking
