#include "ttlab/tracking/camera.hpp"

#include <cmath>

#include "ttlab/core/errors.hpp"

namespace ttlab::tracking {

void CameraModel::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0)) throw InvalidArgument("camera: focal lengths must be positive");
    if (width <= 0 || height <= 0) throw InvalidArgument("camera: resolution must be positive");
    if (!(noise_px >= 0.0)) throw InvalidArgument("camera: noise_px must be non-negative");
}

Vec3 CameraModel::center() const { return world_to_camera.inverse().translation(); }

Mat34 CameraModel::projection_matrix() const {
    Mat3 k;
    k << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
    return k * world_to_camera.matrix().topRows<3>();
}

CameraModel CameraModel::look_at(const Vec3& eye, const Vec3& target, double focal_px) {
    CameraModel c;
    c.fx = c.fy = focal_px;
    const Vec3 z = (target - eye).normalized();
    Vec3 x = z.cross(Vec3::UnitZ());
    if (x.norm() < 1e-9) x = Vec3::UnitX();
    x.normalize();
    const Vec3 y = z.cross(x);
    Mat3 r;
    r.row(0) = x.transpose();
    r.row(1) = y.transpose();
    r.row(2) = z.transpose();
    c.world_to_camera = Pose3::Identity();
    c.world_to_camera.linear() = r;
    c.world_to_camera.translation() = -r * eye;
    return c;
}

Vec2 project_exact(const CameraModel& cam, const Vec3& point) {
    const Vec3 pc = cam.world_to_camera * point;
    if (!(pc.z() > 0.0)) throw InvalidArgument("camera: point is behind the camera");
    return {cam.fx * pc.x() / pc.z() + cam.cx, cam.fy * pc.y() / pc.z() + cam.cy};
}

Vec2 project(const CameraModel& cam, const Vec3& point, Rng* rng) {
    Vec2 px = project_exact(cam, point);
    if (cam.noise_px > 0.0) {
        if (!rng) throw InvalidArgument("camera: noisy projection needs a random generator");
        px.x() += cam.noise_px * standard_normal(*rng);
        px.y() += cam.noise_px * standard_normal(*rng);
    }
    if (cam.quantize) px = px.array().round();
    return px;
}

}  // namespace ttlab::tracking
