#pragma once

#include <span>
#include <vector>

#include "ttlab/core/types.hpp"

namespace ttlab::fidelity {

/// Fixed-capacity ring of timestamped vectors. Timestamps must be strictly
/// increasing; once full the oldest sample is evicted.
class TimedBuffer {
public:
    static constexpr int kDefaultCapacity = 256;

    explicit TimedBuffer(int dim = 1, int capacity = kDefaultCapacity);

    void push(double t, std::span<const double> value);
    void push(double t, const VecX& value) { push(t, std::span<const double>(value.data(), value.size())); }
    void clear();

    int dim() const { return dim_; }
    int capacity() const { return capacity_; }
    int size() const { return size_; }
    bool empty() const { return size_ == 0; }

    /// i = 0 is the oldest retained sample.
    double time_at(int i) const { return times_[physical(i)]; }
    std::span<const double> value_at(int i) const {
        return {values_.data() + static_cast<std::size_t>(physical(i)) * dim_, static_cast<std::size_t>(dim_)};
    }
    VecX sample(int i) const;
    double oldest_time() const { return time_at(0); }
    double newest_time() const { return time_at(size_ - 1); }

    /// Index of the last sample with time <= t, or -1 when t precedes all samples.
    int floor_index(double t) const;

private:
    int physical(int i) const { return (head_ + i) % capacity_; }

    int dim_;
    int capacity_;
    int head_ = 0;
    int size_ = 0;
    std::vector<double> times_;
    std::vector<double> values_;
};

/// Linear interpolation between bracketing samples; queries outside the
/// buffered range return the oldest or newest value. Throws on empty buffer.
VecX interpolate_timed_buffer(const TimedBuffer& buf, double t_query);

/// Allocation-free form of interpolate_timed_buffer writing dim() values.
void interpolate_into(const TimedBuffer& buf, double t_query, std::span<double> out);

/// Value the signal had `latency` seconds before `now`.
VecX delayed_view(const TimedBuffer& buf, double now, double latency);

}  // namespace ttlab::fidelity
