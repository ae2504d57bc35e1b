#include "ttlab/fidelity/timed_buffer.hpp"

#include <algorithm>
#include <cmath>

#include "ttlab/core/errors.hpp"

namespace ttlab::fidelity {

TimedBuffer::TimedBuffer(int dim, int capacity)
    : dim_(dim), capacity_(capacity), times_(capacity), values_(static_cast<std::size_t>(capacity) * dim) {
    if (dim < 1) throw InvalidArgument("timed buffer dimension must be >= 1");
    if (capacity < 2) throw InvalidArgument("timed buffer capacity must be >= 2");
}

void TimedBuffer::push(double t, std::span<const double> value) {
    if (static_cast<int>(value.size()) != dim_) throw InvalidArgument("timed buffer: value dimension mismatch");
    if (!std::isfinite(t)) throw InvalidArgument("timed buffer: non-finite timestamp");
    if (size_ > 0 && !(t > newest_time())) throw InvalidArgument("timed buffer: timestamps must strictly increase");
    int slot;
    if (size_ < capacity_) {
        slot = physical(size_);
        ++size_;
    } else {
        slot = head_;
        head_ = (head_ + 1) % capacity_;
    }
    times_[slot] = t;
    std::copy(value.begin(), value.end(), values_.begin() + static_cast<std::ptrdiff_t>(slot) * dim_);
}

void TimedBuffer::clear() {
    head_ = 0;
    size_ = 0;
}

VecX TimedBuffer::sample(int i) const {
    const auto v = value_at(i);
    return Eigen::Map<const VecX>(v.data(), dim_);
}

int TimedBuffer::floor_index(double t) const {
    int lo = 0;
    int hi = size_;  // first index with time > t lies in [lo, hi]
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (time_at(mid) <= t) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return lo - 1;
}

void interpolate_into(const TimedBuffer& buf, double t, std::span<double> out) {
    if (buf.empty()) throw InvalidArgument("interpolation on an empty timed buffer");
    const int i = buf.floor_index(t);
    if (i < 0) {
        const auto v = buf.value_at(0);
        std::copy(v.begin(), v.end(), out.begin());
        return;
    }
    if (i >= buf.size() - 1) {
        const auto v = buf.value_at(buf.size() - 1);
        std::copy(v.begin(), v.end(), out.begin());
        return;
    }
    const double t0 = buf.time_at(i);
    const double t1 = buf.time_at(i + 1);
    const double w = (t - t0) / (t1 - t0);
    const auto a = buf.value_at(i);
    const auto b = buf.value_at(i + 1);
    for (int k = 0; k < buf.dim(); ++k) out[k] = a[k] + w * (b[k] - a[k]);
}

VecX interpolate_timed_buffer(const TimedBuffer& buf, double t_query) {
    VecX out(buf.dim());
    interpolate_into(buf, t_query, std::span<double>(out.data(), out.size()));
    return out;
}

VecX delayed_view(const TimedBuffer& buf, double now, double latency) {
    if (!(latency >= 0.0)) throw InvalidArgument("latency must be non-negative");
    return interpolate_timed_buffer(buf, now - latency);
}

}  // namespace ttlab::fidelity
