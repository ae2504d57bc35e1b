#pragma once

#include "ttlab/core/rng.hpp"
#include "ttlab/core/types.hpp"

namespace ttlab::tracking {

using Mat34 = Eigen::Matrix<double, 3, 4>;

/// Pinhole camera. Camera frame: z forward, x right, y down.
struct CameraModel {
    double fx = 1100.0;
    double fy = 1100.0;
    double cx = 640.0;
    double cy = 512.0;
    int width = 1280;
    int height = 1024;
    Pose3 world_to_camera = Pose3::Identity();
    bool quantize = false;
    double noise_px = 0.0;  ///< stddev of Gaussian detection noise

    void validate() const;
    Vec3 center() const;
    /// K [R | t].
    Mat34 projection_matrix() const;

    /// Camera at `eye` looking at `target` with image "up" along world +z.
    static CameraModel look_at(const Vec3& eye, const Vec3& target, double focal_px = 1100.0);
};

struct Detection2D {
    Vec2 pixel = Vec2::Zero();
    Vec2 velocity_px = Vec2::Zero();
    double score = 1.0;
    int camera_id = 0;
    double timestamp = 0.0;
};

/// Ideal pinhole projection. Throws InvalidArgument for points at or behind the camera.
Vec2 project_exact(const CameraModel& cam, const Vec3& point);

/// Projection with the camera's detection model: Gaussian noise (needs `rng`
/// when noise_px > 0) followed by rounding to the pixel grid when enabled.
Vec2 project(const CameraModel& cam, const Vec3& point, Rng* rng = nullptr);

}  // namespace ttlab::tracking
