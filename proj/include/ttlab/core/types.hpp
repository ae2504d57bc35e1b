#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace ttlab {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Mat3 = Eigen::Matrix3d;
using Pose3 = Eigen::Isometry3d;

inline constexpr double kGravity = 9.81;

inline Vec3 gravity_vector() { return {0.0, 0.0, -kGravity}; }

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    return m.allFinite();
}

}  // namespace ttlab
