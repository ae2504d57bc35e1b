#include "ttlab/realbridge/safety.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "ttlab/core/errors.hpp"

namespace ttlab::realbridge {
namespace {

using dynamics::JointVector;

constexpr int kBacktrackSteps = 30;

// Largest amount by which the paddle center violates the region (0 when inside).
double region_violation(const Vec3& p, const SafetyLimits& l) {
    double v = 0.0;
    for (int a = 0; a < 3; ++a) {
        double lo = l.cube_min[a];
        if (a == 2) lo = std::max(lo, l.min_paddle_height);
        v = std::max({v, lo - p[a], p[a] - l.cube_max[a]});
    }
    return v;
}

void cap_joints(const dynamics::KinematicChain& chain, const JointVector& q, double lookahead, JointVector& v) {
    for (int i = 0; i < dynamics::kDof; ++i) {
        const auto& j = chain.joints[i];
        v[i] = std::clamp(v[i], -j.velocity_limit, j.velocity_limit);
        if (q[i] >= j.upper) {
            v[i] = std::min(v[i], 0.0);
        } else if (q[i] + v[i] * lookahead > j.upper) {
            v[i] = (j.upper - q[i]) / lookahead;
        }
        if (q[i] <= j.lower) {
            v[i] = std::max(v[i], 0.0);
        } else if (q[i] + v[i] * lookahead < j.lower) {
            v[i] = (j.lower - q[i]) / lookahead;
        }
    }
}

bool joints_ok(const dynamics::KinematicChain& chain, const JointVector& q, const JointVector& q_next) {
    for (int i = 0; i < dynamics::kDof; ++i) {
        const auto& j = chain.joints[i];
        // Inside the limits, or no further outside than before.
        const double before = std::max({0.0, j.lower - q[i], q[i] - j.upper});
        const double after = std::max({0.0, j.lower - q_next[i], q_next[i] - j.upper});
        if (after > before + 1e-12) return false;
    }
    return true;
}

}  // namespace

void SafetyLimits::validate() const {
    if (!(cube_min.array() < cube_max.array()).all()) throw InvalidArgument("safety: cube min must be below max");
    if (!(lookahead > 0.0)) throw InvalidArgument("safety: lookahead must be positive");
    if (!(step > 0.0) || step > lookahead) throw InvalidArgument("safety: step must lie in (0, lookahead]");
}

SafeCommand filter_command_safety(const dynamics::KinematicChain& chain, const JointVector& q,
                                  const JointVector& velocity, const SafetyLimits& limits) {
    limits.validate();
    if (!velocity.allFinite()) throw InvalidArgument("safety: velocity command contains non-finite values");
    SafeCommand out;
    JointVector v = velocity;
    cap_joints(chain, q, limits.lookahead, v);

    const Vec3 p = dynamics::paddle_pose(chain, q).position;
    const dynamics::PositionJacobian jac = dynamics::position_jacobian(chain, q);
    Vec3 pdot = jac * v;
    const Vec3 predicted = p + pdot * limits.lookahead;
    Vec3 removed = Vec3::Zero();
    for (int a = 0; a < 3; ++a) {
        double lo = limits.cube_min[a];
        if (a == 2) lo = std::max(lo, limits.min_paddle_height);
        if (predicted[a] < lo && pdot[a] < 0.0) removed[a] = pdot[a];
        if (predicted[a] > limits.cube_max[a] && pdot[a] > 0.0) removed[a] = pdot[a];
    }
    if (!removed.isZero()) {
        const Eigen::JacobiSVD<MatX> svd(MatX(jac), Eigen::ComputeThinU | Eigen::ComputeThinV);
        v -= svd.solve(removed);
        cap_joints(chain, q, limits.lookahead, v);
    }

    // Nonlinear check at the next control step and at the lookahead horizon.
    const double before = region_violation(p, limits);
    for (int k = 0; k <= kBacktrackSteps; ++k) {
        if (k == kBacktrackSteps) v.setZero();
        bool ok = true;
        for (double h : {limits.step, limits.lookahead}) {
            const JointVector qn = q + v * h;
            if (!joints_ok(chain, q, qn)) ok = false;
            else if (region_violation(dynamics::paddle_pose(chain, qn).position, limits) > before + 1e-12) ok = false;
            if (!ok) break;
        }
        if (ok) break;
        v *= 0.5;
    }

    out.velocity = v;
    out.position = q + v * limits.step;
    out.modified = (v - velocity).cwiseAbs().maxCoeff() > 0.0;
    return out;
}

}  // namespace ttlab::realbridge
