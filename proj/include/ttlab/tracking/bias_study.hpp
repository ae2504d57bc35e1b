#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ttlab/tracking/camera.hpp"

namespace ttlab::tracking {

struct StereoPair {
    std::string name;
    CameraModel a;
    CameraModel b;
};

/// Overhead wide-angle cameras 2 m above the table, 0.2 m apart beside the same long edge.
StereoPair same_side_pair();
/// Overhead wide-angle cameras 2 m above the table, one beside each long edge.
StereoPair opposite_side_pair();

struct BiasStudyConfig {
    std::vector<double> heights{0.25};
    double x = 0.0;
    double y_min = -1.37;
    double y_max = 1.37;
    int y_points = 29;
    int positions = 200;   ///< true positions drawn around each grid point
    int samples = 100;     ///< detection draws per true position
    double jitter = 0.02;  ///< half-width of the box true positions are drawn from
    bool quantize = true;
    double noise_px = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
};

struct BiasPoint {
    std::string config;
    double height = 0.0;
    double y = 0.0;
    Vec3 mean_error = Vec3::Zero();  ///< mean signed error over all draws
    double mean_bias = 0.0;          ///< mean over true positions of |E[estimate] - truth|
    double std = 0.0;                ///< sqrt(mean |e - E[e | position]|^2), pooled
};

/// Monte-Carlo triangulation error along the table center line for each pair.
///
/// Detections are the true projection rounded to the pixel grid (when
/// quantizing) plus Gaussian noise. The bias of one true position is the mean
/// signed error over its detection draws; rounding makes it depend on the
/// sub-pixel phase, so each grid point reports the mean bias magnitude over
/// `positions` true positions in a small box around it.
std::vector<BiasPoint> bias_study(const std::vector<StereoPair>& pairs, const BiasStudyConfig& config);

/// Columns: y_position_m, config, mean_bias_m, std_m (plus height_m).
void write_bias_csv(std::ostream& os, const std::vector<BiasPoint>& points);

}  // namespace ttlab::tracking
