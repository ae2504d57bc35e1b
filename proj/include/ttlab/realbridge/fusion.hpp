#pragma once

#include <array>
#include <mutex>
#include <string_view>

#include "ttlab/dynamics/kinematics.hpp"
#include "ttlab/fidelity/timed_buffer.hpp"
#include "ttlab/realbridge/savitzky_golay.hpp"

namespace ttlab::realbridge {

enum class Modality { ball = 0, arm, gantry };
inline constexpr int kModalities = 3;
std::string_view to_string(Modality m);

/// Native rate and dimension of a modality: ball 125 Hz x3, arm 248 Hz x6, gantry 125 Hz x2.
double nominal_rate_hz(Modality m);
int modality_dim(Modality m);

/// One producer pushes samples, one consumer takes snapshots; both sides lock.
class SensorStream {
public:
    explicit SensorStream(Modality modality, int capacity = 64);

    Modality modality() const { return modality_; }
    double rate_hz() const { return rate_hz_; }
    void push(double t, std::span<const double> value);
    void clear();
    fidelity::TimedBuffer snapshot() const;

private:
    Modality modality_;
    double rate_hz_;
    mutable std::mutex mutex_;
    fidelity::TimedBuffer buffer_;
};

struct SensorStreams {
    SensorStream ball{Modality::ball};
    SensorStream arm{Modality::arm};
    SensorStream gantry{Modality::gantry};

    SensorStream& get(Modality m);
    const SensorStream& get(Modality m) const;
    void clear();
};

struct FusionParams {
    SavitzkyGolay filter;
    double max_extrapolation = 0.05;  ///< s beyond the newest sample
};

struct FusedObservation {
    Vec3 ball = Vec3::Zero();
    dynamics::JointVector joints = dynamics::JointVector::Zero();  ///< gantry x, y, then arm
    std::array<bool, kModalities> stale{};

    bool any_stale() const { return stale[0] || stale[1] || stale[2]; }
    /// joints (8) followed by ball (3), the environment's joint-mode feature layout.
    VecX feature() const;
};

/// Value of one buffered signal at t_query: smoothed samples linearly
/// interpolated, or extrapolated from the last two smoothed samples. Returns
/// true when t_query lies more than max_extrapolation past the newest sample,
/// in which case the value is held at that horizon.
bool fuse_buffer(const fidelity::TimedBuffer& buf, double t_query, const FusionParams& params, std::span<double> out);

/// Throws Error naming the modality when a stream is empty.
FusedObservation fuse_sensor_observation(const SensorStreams& streams, double t_query, const FusionParams& params = {});

}  // namespace ttlab::realbridge
