#include "ttlab/tracking/kalman.hpp"

#include <Eigen/Cholesky>

#include "ttlab/core/errors.hpp"

namespace ttlab::tracking {

bool is_spd(const Mat6& m) {
    if (!m.allFinite()) return false;
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff())) return false;
    Eigen::LLT<Mat6> llt(m);
    return llt.info() == Eigen::Success;
}

TrackState init_track(const Vec3& position, double t, const KalmanParams& params) {
    TrackState s;
    s.mean.head<3>() = position;
    s.covariance.setZero();
    s.covariance.diagonal().head<3>().setConstant(params.measurement_noise * params.measurement_noise);
    s.covariance.diagonal().tail<3>().setConstant(params.initial_velocity_std * params.initial_velocity_std);
    s.last_update = t;
    s.consecutive_hits = 1;
    s.last_accepted = true;
    if (params.confirm_hits <= 1) s.status = TrackStatus::active;
    return s;
}

TrackState kalman_step(const TrackState& track, const std::optional<Vec3>& measurement, double t,
                       const KalmanParams& params) {
    if (t < track.last_update) throw InvalidArgument("kalman: time moves backwards");
    if (!is_spd(track.covariance)) throw InvalidArgument("kalman: covariance is not symmetric positive definite");
    const double dt = t - track.last_update;
    TrackState s = track;
    s.last_update = t;

    Mat6 f = Mat6::Identity();
    f.topRightCorner<3, 3>() = Mat3::Identity() * dt;
    const Vec3 g = gravity_vector();
    s.mean = f * track.mean;
    s.mean.head<3>() += 0.5 * g * dt * dt;
    s.mean.tail<3>() += g * dt;
    Mat6 q = Mat6::Zero();
    q.bottomRightCorner<3, 3>() = Mat3::Identity() * (params.process_noise * params.process_noise * dt);
    s.covariance = f * track.covariance * f.transpose() + q;
    s.covariance = 0.5 * (s.covariance + s.covariance.transpose());

    s.last_accepted = false;
    if (measurement) {
        Eigen::Matrix<double, 3, 6> h = Eigen::Matrix<double, 3, 6>::Zero();
        h.leftCols<3>().setIdentity();
        const Mat3 r = Mat3::Identity() * (params.measurement_noise * params.measurement_noise);
        const Vec3 innovation = *measurement - s.mean.head<3>();
        const Mat3 cov_in = h * s.covariance * h.transpose() + r;
        const Eigen::LLT<Mat3> llt(cov_in);
        const double d2 = innovation.dot(llt.solve(innovation));
        if (d2 < params.gate) {
            const Eigen::Matrix<double, 6, 3> gain = llt.solve(h * s.covariance).transpose();
            s.mean += gain * innovation;
            const Mat6 a = Mat6::Identity() - gain * h;
            s.covariance = a * s.covariance * a.transpose() + gain * r * gain.transpose();
            s.covariance = 0.5 * (s.covariance + s.covariance.transpose());
            s.last_accepted = true;
        }
    }

    if (s.status != TrackStatus::terminated) {
        if (s.last_accepted) {
            ++s.consecutive_hits;
            s.consecutive_misses = 0;
            if (s.status == TrackStatus::tentative && s.consecutive_hits >= params.confirm_hits)
                s.status = TrackStatus::active;
        } else {
            s.consecutive_hits = 0;
            ++s.consecutive_misses;
            if (s.consecutive_misses >= params.max_misses) s.status = TrackStatus::terminated;
        }
    }
    return s;
}

}  // namespace ttlab::tracking
