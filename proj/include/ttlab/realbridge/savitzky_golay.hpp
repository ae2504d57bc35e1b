#pragma once

#include <span>
#include <vector>

#include "ttlab/core/types.hpp"
#include "ttlab/fidelity/timed_buffer.hpp"

namespace ttlab::realbridge {

struct SavitzkyGolay {
    int window = 9;
    int order = 2;

    void validate() const;
};

/// Weights w such that sum_j w_j x_j is the value at `times[target]` of the
/// least-squares polynomial of degree min(order, n-1) through (times, x).
/// Works for uneven spacing; for evenly spaced samples these are the
/// classical Savitzky-Golay coefficients.
VecX savgol_weights(std::span<const double> times, int target, int order);

/// Smooths a uniformly sampled series. Interior points use the centered
/// window; the first and last window/2 points are read off the polynomial
/// fitted to the first or last full window. Series shorter than the window
/// are fitted as a whole.
std::vector<double> savgol_filter(std::span<const double> x, const SavitzkyGolay& filter = {});

/// Smoothed value of sample `index` of a timed buffer, using the window of
/// samples around it (shifted inward at the ends). Writes dim() values.
void smooth_sample(const fidelity::TimedBuffer& buf, int index, const SavitzkyGolay& filter, std::span<double> out);

}  // namespace ttlab::realbridge
