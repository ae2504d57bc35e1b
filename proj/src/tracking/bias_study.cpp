#include "ttlab/tracking/bias_study.hpp"

#include <iomanip>
#include <ostream>

#include "ttlab/core/errors.hpp"
#include "ttlab/tracking/triangulation.hpp"

namespace ttlab::tracking {
namespace {

constexpr double kCameraHeight = 2.0;
constexpr double kFocalPx = 500.0;  // wide-angle stand-in for the fisheye lenses
constexpr double kSideOffset = 1.8;

}  // namespace

StereoPair same_side_pair() {
    const Vec3 target(0.0, 0.0, 0.25);
    return {"same_side", CameraModel::look_at({kSideOffset, -0.1, kCameraHeight}, target, kFocalPx),
            CameraModel::look_at({kSideOffset, 0.1, kCameraHeight}, target, kFocalPx)};
}

StereoPair opposite_side_pair() {
    const Vec3 target(0.0, 0.0, 0.25);
    return {"opposite_side", CameraModel::look_at({kSideOffset, 0.0, kCameraHeight}, target, kFocalPx),
            CameraModel::look_at({-kSideOffset, 0.0, kCameraHeight}, target, kFocalPx)};
}

void BiasStudyConfig::validate() const {
    if (heights.empty()) throw InvalidArgument("bias study: at least one height is required");
    if (y_points < 1 || samples < 1 || positions < 1)
        throw InvalidArgument("bias study: y_points, positions and samples must be positive");
    if (!(jitter >= 0.0)) throw InvalidArgument("bias study: jitter must be non-negative");
    if (!(y_min <= y_max)) throw InvalidArgument("bias study: y_min must not exceed y_max");
    if (!(noise_px >= 0.0)) throw InvalidArgument("bias study: noise_px must be non-negative");
}

std::vector<BiasPoint> bias_study(const std::vector<StereoPair>& pairs, const BiasStudyConfig& config) {
    config.validate();
    std::vector<BiasPoint> out;
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
        std::vector<CameraModel> cams{pairs[pi].a, pairs[pi].b};
        for (auto& c : cams) c.validate();
        for (std::size_t hi = 0; hi < config.heights.size(); ++hi) {
            for (int yi = 0; yi < config.y_points; ++yi) {
                const double y = config.y_points == 1
                                     ? config.y_min
                                     : config.y_min + (config.y_max - config.y_min) * yi / (config.y_points - 1);
                const Vec3 center(config.x, y, config.heights[hi]);
                Rng rng(derive_seed(config.seed, {pi, hi, static_cast<std::uint64_t>(yi)}));
                const bool noisy = config.noise_px > 0.0;
                const int draws = noisy ? config.samples : 1;
                BiasPoint p;
                p.config = pairs[pi].name;
                p.height = config.heights[hi];
                p.y = y;
                double scatter = 0.0;
                for (int k = 0; k < config.positions; ++k) {
                    Vec3 truth = center;
                    for (int a = 0; a < 3; ++a) truth[a] += uniform(rng, -config.jitter, config.jitter);
                    Vec2 base[2];
                    for (int c = 0; c < 2; ++c) {
                        base[c] = project_exact(cams[c], truth);
                        if (config.quantize) base[c] = base[c].array().round();
                    }
                    Vec3 sum = Vec3::Zero();
                    double sq = 0.0;
                    for (int s = 0; s < draws; ++s) {
                        Vec2 px[2] = {base[0], base[1]};
                        if (noisy)
                            for (auto& v : px) v += config.noise_px * Vec2(standard_normal(rng), standard_normal(rng));
                        const Vec3 e = triangulate_dlt(std::span<const CameraModel>(cams), std::span<const Vec2>(px)) - truth;
                        sum += e;
                        sq += e.squaredNorm();
                    }
                    const Vec3 bias = sum / draws;
                    p.mean_error += bias;
                    p.mean_bias += bias.norm();
                    scatter += sq / draws - bias.squaredNorm();
                }
                p.mean_error /= config.positions;
                p.mean_bias /= config.positions;
                p.std = std::sqrt(std::max(scatter / config.positions, 0.0));
                out.push_back(p);
            }
        }
    }
    return out;
}

void write_bias_csv(std::ostream& os, const std::vector<BiasPoint>& points) {
    os << "y_position_m,config,mean_bias_m,std_m,height_m\n";
    os << std::setprecision(10);
    for (const auto& p : points) os << p.y << ',' << p.config << ',' << p.mean_bias << ',' << p.std << ',' << p.height << '\n';
}

}  // namespace ttlab::tracking
