#include "ttlab/dynamics/kinematics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace ttlab::dynamics {
namespace {

struct ChainFrames {
    std::array<Vec3, kDof> axes;     // world-frame joint axes
    std::array<Vec3, kDof> origins;  // world-frame joint origins
    Pose3 tip = Pose3::Identity();
};

ChainFrames compose(const KinematicChain& chain, const JointVector& q) {
    ChainFrames f;
    Pose3 t = Pose3::Identity();
    for (int i = 0; i < kDof; ++i) {
        const Joint& j = chain.joints[i];
        t = t * j.origin;
        f.axes[i] = t.linear() * j.axis;
        f.origins[i] = t.translation();
        if (j.kind == JointKind::prismatic) {
            t.translate(j.axis * q[i]);
        } else {
            t.rotate(Eigen::AngleAxisd(q[i], j.axis));
        }
    }
    f.tip = t * chain.end_effector_offset;
    return f;
}

Pose3 make_origin(double x, double y, double z) {
    Pose3 p = Pose3::Identity();
    p.translation() = Vec3(x, y, z);
    return p;
}

}  // namespace

void KinematicChain::validate() const {
    if (joints.size() != kDof) {
        throw InvalidArgument("kinematic chain must have exactly " + std::to_string(kDof) + " joints, got " +
                              std::to_string(joints.size()));
    }
    for (const Joint& j : joints) {
        if (!(j.lower < j.upper)) throw InvalidArgument("joint '" + j.name + "' has lower >= upper");
        if (std::abs(j.axis.norm() - 1.0) > 1e-9) throw InvalidArgument("joint '" + j.name + "' axis not unit");
        if (!(j.velocity_limit >= 0.0) || !(j.acceleration_limit > 0.0))
            throw InvalidArgument("joint '" + j.name + "' has invalid rate limits");
    }
    if (std::abs(paddle_normal_local.norm() - 1.0) > 1e-9) throw InvalidArgument("paddle normal not unit");
}

JointVector KinematicChain::lower_limits() const {
    JointVector v;
    for (int i = 0; i < kDof; ++i) v[i] = joints[i].lower;
    return v;
}
JointVector KinematicChain::upper_limits() const {
    JointVector v;
    for (int i = 0; i < kDof; ++i) v[i] = joints[i].upper;
    return v;
}
JointVector KinematicChain::velocity_limits() const {
    JointVector v;
    for (int i = 0; i < kDof; ++i) v[i] = joints[i].velocity_limit;
    return v;
}
JointVector KinematicChain::acceleration_limits() const {
    JointVector v;
    for (int i = 0; i < kDof; ++i) v[i] = joints[i].acceleration_limit;
    return v;
}

KinematicChain KinematicChain::default_robot() {
    KinematicChain c;
    auto add = [&](std::string name, JointKind kind, Vec3 axis, Pose3 origin, double lo, double hi, double vel,
                   double acc) {
        Joint j;
        j.name = std::move(name);
        j.kind = kind;
        j.axis = axis;
        j.origin = origin;
        j.lower = lo;
        j.upper = hi;
        j.velocity_limit = vel;
        j.acceleration_limit = acc;
        c.joints.push_back(j);
    };
    using K = JointKind;
    add("gantry_x", K::prismatic, Vec3::UnitX(), make_origin(0.3, -2.18, -0.34), -1.0, 1.0, 2.0, 8.0);
    add("gantry_y", K::prismatic, Vec3::UnitY(), Pose3::Identity(), -0.5, 0.5, 2.0, 8.0);
    add("base", K::revolute, Vec3::UnitZ(), Pose3::Identity(), -2.87, 2.87, 4.36, 40.0);
    add("shoulder", K::revolute, Vec3::UnitX(), make_origin(0.0, 0.0, 0.29), -1.92, 1.92, 4.36, 40.0);
    add("elbow", K::revolute, Vec3::UnitX(), make_origin(0.0, 0.0, 0.27), -1.92, 1.22, 4.36, 40.0);
    add("forearm_roll", K::revolute, Vec3::UnitY(), make_origin(0.0, 0.0, 0.07), -2.79, 2.79, 5.58, 60.0);
    add("wrist_bend", K::revolute, Vec3::UnitX(), make_origin(0.0, 0.302, 0.0), -2.09, 2.09, 5.58, 60.0);
    add("wrist_roll", K::revolute, Vec3::UnitY(), make_origin(0.0, 0.072, 0.0), -3.14, 3.14, 7.33, 60.0);
    c.end_effector_offset = make_origin(0.0, 0.188, 0.0);
    c.paddle_normal_local = Vec3::UnitY();
    return c;
}

Vec3 normal_from_angles(double roll, double yaw) {
    const double c = std::cos(roll);
    return {c * std::sin(yaw), c * std::cos(yaw), std::sin(roll)};
}

void angles_from_normal(const Vec3& n, double& roll, double& yaw) {
    roll = std::asin(std::clamp(n.z(), -1.0, 1.0));
    yaw = std::atan2(n.x(), n.y());
}

TaskVector PaddlePose::task_vector() const {
    TaskVector t;
    t << position, roll, yaw;
    return t;
}

PaddlePose PaddlePose::from_task_vector(const TaskVector& t) {
    PaddlePose p;
    p.position = t.head<3>();
    p.roll = t[3];
    p.yaw = t[4];
    p.normal = normal_from_angles(p.roll, p.yaw);
    return p;
}

std::vector<int> limit_violations(const KinematicChain& chain, const JointVector& q, double tol) {
    std::vector<int> bad;
    for (int i = 0; i < kDof; ++i) {
        if (!(q[i] >= chain.joints[i].lower - tol && q[i] <= chain.joints[i].upper + tol)) bad.push_back(i);
    }
    return bad;
}

PaddlePose paddle_pose(const KinematicChain& chain, const JointVector& q, const JointVector* qdot) {
    const ChainFrames f = compose(chain, q);
    PaddlePose p;
    p.position = f.tip.translation();
    p.normal = (f.tip.linear() * chain.paddle_normal_local).normalized();
    angles_from_normal(p.normal, p.roll, p.yaw);
    if (qdot != nullptr) {
        Vec3 v = Vec3::Zero();
        for (int i = 0; i < kDof; ++i) {
            if (chain.joints[i].kind == JointKind::prismatic) {
                v += f.axes[i] * (*qdot)[i];
            } else {
                v += f.axes[i].cross(p.position - f.origins[i]) * (*qdot)[i];
            }
        }
        p.velocity = v;
    }
    return p;
}

PaddlePose forward_kinematics(const KinematicChain& chain, const JointVector& q, const JointVector* qdot) {
    const auto bad = limit_violations(chain, q);
    if (!bad.empty()) {
        std::ostringstream os;
        os << "joint position outside limits:";
        for (int i : bad) {
            os << ' ' << chain.joints[i].name << "[" << i << "]=" << q[i] << " not in [" << chain.joints[i].lower
               << ", " << chain.joints[i].upper << "]";
        }
        throw JointLimitError(os.str(), bad);
    }
    return paddle_pose(chain, q, qdot);
}

PositionJacobian position_jacobian(const KinematicChain& chain, const JointVector& q) {
    const ChainFrames f = compose(chain, q);
    const Vec3 p = f.tip.translation();
    PositionJacobian j;
    for (int i = 0; i < kDof; ++i) {
        j.col(i) = chain.joints[i].kind == JointKind::prismatic ? f.axes[i] : Vec3(f.axes[i].cross(p - f.origins[i]));
    }
    return j;
}

TaskJacobian task_jacobian(const KinematicChain& chain, const JointVector& q) {
    const ChainFrames f = compose(chain, q);
    const Vec3 p = f.tip.translation();
    const Vec3 n = (f.tip.linear() * chain.paddle_normal_local).normalized();
    const double horiz2 = n.x() * n.x() + n.y() * n.y();
    const double horiz = std::sqrt(horiz2);
    TaskJacobian j;
    for (int i = 0; i < kDof; ++i) {
        if (chain.joints[i].kind == JointKind::prismatic) {
            j.col(i) << f.axes[i], 0.0, 0.0;
            continue;
        }
        const Vec3 dp = f.axes[i].cross(p - f.origins[i]);
        const Vec3 dn = f.axes[i].cross(n);
        // roll = asin(n_z), yaw = atan2(n_x, n_y)
        const double droll = horiz > 1e-12 ? dn.z() / horiz : 0.0;
        const double dyaw = horiz2 > 1e-12 ? (n.y() * dn.x() - n.x() * dn.y()) / horiz2 : 0.0;
        j.col(i) << dp, droll, dyaw;
    }
    return j;
}

std::vector<Vec3> link_points(const KinematicChain& chain, const JointVector& q) {
    const ChainFrames f = compose(chain, q);
    std::vector<Vec3> pts(f.origins.begin(), f.origins.end());
    pts.push_back(f.tip.translation());
    return pts;
}

}  // namespace ttlab::dynamics
