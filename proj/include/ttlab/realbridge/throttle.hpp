#pragma once

#include <chrono>
#include <cstdint>
#include <functional>

namespace ttlab::realbridge {

/// Time at which a step started at `step_start` hands back control: one
/// period later when the compute fit in the period, otherwise the next
/// multiple of the period after the compute finished.
double throttle_step(double step_start, double compute_elapsed, double hz);

/// Keeps step boundaries on the grid episode_start + k / hz. Boundaries are
/// computed from the integer step index, so they stay exact multiples.
class Throttler {
public:
    explicit Throttler(double hz);

    void start(double episode_start);
    /// Given the clock reading when the step's compute finished, returns the
    /// time the next step begins and advances to it.
    double finish_step(double now);

    double hz() const { return hz_; }
    std::int64_t step_index() const { return index_; }
    double boundary(std::int64_t k) const { return start_ + static_cast<double>(k) / hz_; }
    std::int64_t overruns() const { return overruns_; }

private:
    double hz_;
    double start_ = 0.0;
    std::int64_t index_ = 0;
    std::int64_t overruns_ = 0;
};

/// Throttler driven by the steady clock that sleeps until each boundary.
class WallClockThrottler {
public:
    explicit WallClockThrottler(double hz) : throttler_(hz) {}
    void start();
    /// Sleeps until the next boundary; returns its offset from start in seconds.
    double wait();

private:
    using Clock = std::chrono::steady_clock;
    double now() const;
    Throttler throttler_;
    Clock::time_point origin_;
};

}  // namespace ttlab::realbridge
