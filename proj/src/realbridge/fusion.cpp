#include "ttlab/realbridge/fusion.hpp"

#include <vector>

#include "ttlab/core/errors.hpp"

namespace ttlab::realbridge {

std::string_view to_string(Modality m) {
    switch (m) {
        case Modality::ball: return "ball";
        case Modality::arm: return "arm";
        case Modality::gantry: return "gantry";
    }
    return "?";
}

double nominal_rate_hz(Modality m) { return m == Modality::arm ? 248.0 : 125.0; }

int modality_dim(Modality m) {
    switch (m) {
        case Modality::ball: return 3;
        case Modality::arm: return 6;
        case Modality::gantry: return 2;
    }
    return 0;
}

SensorStream::SensorStream(Modality modality, int capacity)
    : modality_(modality), rate_hz_(nominal_rate_hz(modality)), buffer_(modality_dim(modality), capacity) {}

void SensorStream::push(double t, std::span<const double> value) {
    std::lock_guard lock(mutex_);
    buffer_.push(t, value);
}

void SensorStream::clear() {
    std::lock_guard lock(mutex_);
    buffer_.clear();
}

fidelity::TimedBuffer SensorStream::snapshot() const {
    std::lock_guard lock(mutex_);
    return buffer_;
}

SensorStream& SensorStreams::get(Modality m) {
    return m == Modality::ball ? ball : m == Modality::arm ? arm : gantry;
}

const SensorStream& SensorStreams::get(Modality m) const {
    return m == Modality::ball ? ball : m == Modality::arm ? arm : gantry;
}

void SensorStreams::clear() {
    ball.clear();
    arm.clear();
    gantry.clear();
}

VecX FusedObservation::feature() const {
    VecX f(dynamics::kDof + 3);
    f.head<dynamics::kDof>() = joints;
    f.tail<3>() = ball;
    return f;
}

bool fuse_buffer(const fidelity::TimedBuffer& buf, double t_query, const FusionParams& params, std::span<double> out) {
    const int dim = buf.dim();
    const int size = buf.size();
    std::vector<double> a(dim), b(dim);
    if (size == 1 || t_query <= buf.oldest_time()) {
        smooth_sample(buf, 0, params.filter, out);
        return false;
    }
    bool stale = false;
    int i0, i1;
    if (t_query >= buf.newest_time()) {
        i0 = size - 2;
        i1 = size - 1;
        if (t_query - buf.newest_time() > params.max_extrapolation) {
            t_query = buf.newest_time() + params.max_extrapolation;
            stale = true;
        }
    } else {
        i0 = buf.floor_index(t_query);
        i1 = i0 + 1;
    }
    smooth_sample(buf, i0, params.filter, a);
    smooth_sample(buf, i1, params.filter, b);
    const double t0 = buf.time_at(i0), t1 = buf.time_at(i1);
    const double u = (t_query - t0) / (t1 - t0);
    for (int d = 0; d < dim; ++d) out[d] = a[d] + u * (b[d] - a[d]);
    return stale;
}

FusedObservation fuse_sensor_observation(const SensorStreams& streams, double t_query, const FusionParams& params) {
    FusedObservation f;
    for (int m = 0; m < kModalities; ++m) {
        const auto mod = static_cast<Modality>(m);
        const fidelity::TimedBuffer buf = streams.get(mod).snapshot();
        if (buf.empty()) throw Error("sensor fusion: " + std::string(to_string(mod)) + " stream has no samples");
        std::span<double> out = mod == Modality::ball     ? std::span<double>(f.ball.data(), 3)
                                : mod == Modality::gantry ? std::span<double>(f.joints.data(), 2)
                                                          : std::span<double>(f.joints.data() + 2, 6);
        f.stale[m] = fuse_buffer(buf, t_query, params, out);
    }
    return f;
}

}  // namespace ttlab::realbridge
