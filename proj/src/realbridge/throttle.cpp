#include "ttlab/realbridge/throttle.hpp"

#include <cmath>
#include <thread>

#include "ttlab/core/errors.hpp"

namespace ttlab::realbridge {
namespace {

// Tolerance for "exactly one period" when the compute time is a float product.
constexpr double kSlack = 1e-9;

std::int64_t periods_needed(double elapsed, double hz) {
    const double n = std::ceil(elapsed * hz - kSlack);
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

}  // namespace

double throttle_step(double step_start, double compute_elapsed, double hz) {
    if (!(hz > 0.0)) throw InvalidArgument("throttle: hz must be positive");
    return step_start + static_cast<double>(periods_needed(compute_elapsed, hz)) / hz;
}

Throttler::Throttler(double hz) : hz_(hz) {
    if (!(hz > 0.0)) throw InvalidArgument("throttle: hz must be positive");
}

void Throttler::start(double episode_start) {
    start_ = episode_start;
    index_ = 0;
    overruns_ = 0;
}

double Throttler::finish_step(double now) {
    const double elapsed = now - boundary(index_);
    const std::int64_t n = periods_needed(elapsed, hz_);
    if (n > 1) ++overruns_;
    index_ += n;
    return boundary(index_);
}

void WallClockThrottler::start() {
    origin_ = Clock::now();
    throttler_.start(0.0);
}

double WallClockThrottler::now() const {
    return std::chrono::duration<double>(Clock::now() - origin_).count();
}

double WallClockThrottler::wait() {
    const double next = throttler_.finish_step(now());
    std::this_thread::sleep_until(origin_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(next)));
    return next;
}

}  // namespace ttlab::realbridge
