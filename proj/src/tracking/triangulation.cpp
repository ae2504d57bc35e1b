#include "ttlab/tracking/triangulation.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "ttlab/core/errors.hpp"

namespace ttlab::tracking {

Vec3 triangulate_dlt(std::span<const CameraModel> cameras, std::span<const Vec2> pixels) {
    if (cameras.size() != pixels.size()) throw InvalidArgument("triangulation: camera and pixel counts differ");
    if (cameras.size() < 2) throw InvalidArgument("degenerate geometry: triangulation needs at least two views");
    const int n = static_cast<int>(cameras.size());
    bool distinct = false;
    for (int i = 1; i < n && !distinct; ++i) distinct = (cameras[i].center() - cameras[0].center()).norm() > 1e-9;
    if (!distinct) throw InvalidArgument("degenerate geometry: all cameras share one center");
    Eigen::Matrix<double, Eigen::Dynamic, 4> a(2 * n, 4);
    for (int i = 0; i < n; ++i) {
        const Mat34 p = cameras[i].projection_matrix();
        a.row(2 * i) = pixels[i].x() * p.row(2) - p.row(0);
        a.row(2 * i + 1) = pixels[i].y() * p.row(2) - p.row(1);
    }
    for (int r = 0; r < a.rows(); ++r) a.row(r).normalize();
    Eigen::JacobiSVD<Eigen::Matrix<double, Eigen::Dynamic, 4>> svd(a, Eigen::ComputeFullV);
    const Eigen::Vector4d s = svd.singularValues();
    // With consistent views the null space is one-dimensional; a second small
    // singular value means the rays do not pin down a point.
    if (!(s[2] > 0.0) || s[0] / s[2] > kMaxTriangulationCondition)
        throw InvalidArgument("degenerate geometry: rays are (nearly) parallel");
    const Eigen::Vector4d x = svd.matrixV().col(3);
    if (std::abs(x[3]) < 1e-300) throw InvalidArgument("degenerate geometry: point at infinity");
    return x.head<3>() / x[3];
}

Vec3 triangulate_dlt(const std::vector<CameraModel>& cameras, std::span<const Detection2D> detections) {
    std::vector<CameraModel> cams;
    std::vector<Vec2> px;
    for (const auto& d : detections) {
        if (d.camera_id < 0 || d.camera_id >= static_cast<int>(cameras.size()))
            throw InvalidArgument("triangulation: detection refers to unknown camera " + std::to_string(d.camera_id));
        cams.push_back(cameras[d.camera_id]);
        px.push_back(d.pixel);
    }
    return triangulate_dlt(cams, px);
}

}  // namespace ttlab::tracking
