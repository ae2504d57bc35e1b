#include "ttlab/dynamics/task_space.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

namespace ttlab::dynamics {
namespace {

double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * M_PI);
    return a <= -M_PI ? a + 2.0 * M_PI : a;
}

}  // namespace

TaskVector task_error(const PaddlePose& current, const TaskVector& target) {
    TaskVector e;
    e.head<3>() = target.head<3>() - current.position;
    e[3] = wrap_angle(target[3] - current.roll);
    e[4] = wrap_angle(target[4] - current.yaw);
    return e;
}

TaskCommand task_space_command(const KinematicChain& chain, const JointVector& q, const TaskVector& target,
                               const TaskSpaceParams& params) {
    TaskCommand out;
    TaskVector goal = target;
    for (int a = 0; a < 3; ++a) {
        const double c = std::clamp(goal[a], params.cube_min[a], params.cube_max[a]);
        if (c != goal[a]) out.clamped = true;
        goal[a] = c;
    }
    const PaddlePose pose = paddle_pose(chain, q);
    const TaskVector err = task_error(pose, goal);
    const TaskJacobian j = task_jacobian(chain, q);
    Eigen::Matrix<double, 5, 5> jjt = j * j.transpose();
    jjt.diagonal().array() += params.damping * params.damping;
    const TaskVector y = jjt.ldlt().solve(params.gain * err);
    JointVector qdot = j.transpose() * y;

    double scale = 1.0;
    for (int i = 0; i < kDof; ++i) {
        const double lim = chain.joints[i].velocity_limit;
        const double mag = std::abs(qdot[i]);
        if (mag > lim) scale = std::min(scale, lim / mag);
    }
    out.velocities = qdot * scale;
    return out;
}

ContactResult paddle_contact(const BallState& ball, const PaddlePose& paddle, double restitution) {
    ContactResult r{ball, false};
    const Vec3 rel = ball.velocity - paddle.velocity;
    const double vn = rel.dot(paddle.normal);
    // Which face the ball is on; a ball at the plane counts as in front.
    const double side = (ball.position - paddle.position).dot(paddle.normal) < 0.0 ? -1.0 : 1.0;
    if (!(vn * side < 0.0)) return r;
    r.ball.velocity = rel - (1.0 + restitution) * vn * paddle.normal + paddle.velocity;
    r.contact = true;
    return r;
}

}  // namespace ttlab::dynamics
