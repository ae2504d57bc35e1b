#pragma once

#include <span>
#include <vector>

#include "ttlab/tracking/camera.hpp"

namespace ttlab::tracking {

inline constexpr double kMaxTriangulationCondition = 1e8;

/// Linear (DLT) triangulation from two or more views: the right singular
/// vector of the stacked 2n x 4 system with the smallest singular value,
/// dehomogenized. Rows are scaled to unit norm before the SVD.
/// Throws InvalidArgument("degenerate geometry ...") when the system is
/// ill-conditioned, which includes near-parallel rays and fewer than two views.
Vec3 triangulate_dlt(std::span<const CameraModel> cameras, std::span<const Vec2> pixels);

/// Detections refer to cameras by index via camera_id.
Vec3 triangulate_dlt(const std::vector<CameraModel>& cameras, std::span<const Detection2D> detections);

}  // namespace ttlab::tracking
