#pragma once

#include <string>
#include <vector>

#include "ttlab/core/errors.hpp"
#include "ttlab/core/types.hpp"

namespace ttlab::dynamics {

inline constexpr int kDof = 8;

using JointVector = Eigen::Matrix<double, kDof, 1>;
using TaskVector = Eigen::Matrix<double, 5, 1>;  ///< x, y, z, roll, yaw
using PositionJacobian = Eigen::Matrix<double, 3, kDof>;
using TaskJacobian = Eigen::Matrix<double, 5, kDof>;

enum class JointKind { prismatic, revolute };

struct Joint {
    std::string name;
    JointKind kind = JointKind::revolute;
    Vec3 axis = Vec3::UnitZ();                ///< in the joint frame
    Pose3 origin = Pose3::Identity();         ///< parent frame -> joint frame
    double lower = -1.0;
    double upper = 1.0;
    double velocity_limit = 1.0;
    double acceleration_limit = 10.0;
    double jerk_limit = 1000.0;
};

/// Serial chain: two prismatic gantry axes followed by a six-axis arm in the
/// default layout. The paddle face normal is `paddle_normal_local` expressed
/// in the end-effector frame.
struct KinematicChain {
    std::vector<Joint> joints;
    Pose3 end_effector_offset = Pose3::Identity();
    Vec3 paddle_normal_local = Vec3::UnitY();

    void validate() const;
    JointVector lower_limits() const;
    JointVector upper_limits() const;
    JointVector velocity_limits() const;
    JointVector acceleration_limits() const;

    /// Gantry on x/y rails carrying an IRB-120-like arm; link lengths are
    /// approximate and live in config for other morphologies.
    static KinematicChain default_robot();
};

struct JointState {
    JointVector positions = JointVector::Zero();
    JointVector velocities = JointVector::Zero();
    double time = 0.0;
};

/// Paddle center and face orientation. roll is the elevation of the normal
/// above the horizontal plane, yaw its azimuth measured from +y toward +x.
struct PaddlePose {
    Vec3 position = Vec3::Zero();
    Vec3 normal = Vec3::UnitY();
    double roll = 0.0;
    double yaw = 0.0;
    Vec3 velocity = Vec3::Zero();

    TaskVector task_vector() const;
    static PaddlePose from_task_vector(const TaskVector& t);
};

Vec3 normal_from_angles(double roll, double yaw);
void angles_from_normal(const Vec3& n, double& roll, double& yaw);

/// Raised when a configuration violates joint position limits.
class JointLimitError : public InvalidArgument {
public:
    JointLimitError(const std::string& what, std::vector<int> joints)
        : InvalidArgument(what), joints_(std::move(joints)) {}
    const std::vector<int>& joints() const { return joints_; }

private:
    std::vector<int> joints_;
};

/// Indices of joints whose position is outside [lower - tol, upper + tol].
std::vector<int> limit_violations(const KinematicChain& chain, const JointVector& q, double tol = 1e-12);

/// Paddle pose at q. Paddle velocity is J(q) * qdot when qdot is supplied.
/// Throws JointLimitError naming the offending joints.
PaddlePose forward_kinematics(const KinematicChain& chain, const JointVector& q,
                              const JointVector* qdot = nullptr);

/// Same as forward_kinematics without the limit check; used inside the
/// integrator where positions are already clamped.
PaddlePose paddle_pose(const KinematicChain& chain, const JointVector& q,
                       const JointVector* qdot = nullptr);

PositionJacobian position_jacobian(const KinematicChain& chain, const JointVector& q);

/// Reduced pitch-invariant Jacobian of (x, y, z, roll, yaw).
TaskJacobian task_jacobian(const KinematicChain& chain, const JointVector& q);

/// World-frame positions of every joint origin and the paddle center; used for
/// coarse collision checks.
std::vector<Vec3> link_points(const KinematicChain& chain, const JointVector& q);

}  // namespace ttlab::dynamics
