#include "ttlab/realbridge/savitzky_golay.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>

#include "ttlab/core/errors.hpp"

namespace ttlab::realbridge {
namespace {

// [lo, lo + n) window of n samples around index inside [0, size).
int window_start(int index, int n, int size) {
    return std::clamp(index - n / 2, 0, size - n);
}

}  // namespace

void SavitzkyGolay::validate() const {
    if (window < 1) throw InvalidArgument("savitzky-golay: window must be positive");
    if (order < 0 || order >= window) throw InvalidArgument("savitzky-golay: order must lie in [0, window)");
}

VecX savgol_weights(std::span<const double> times, int target, int order) {
    const int n = static_cast<int>(times.size());
    if (n < 1 || target < 0 || target >= n) throw InvalidArgument("savitzky-golay: bad window");
    const int deg = std::min(order, n - 1);
    const double t0 = times[target];
    double scale = 0.0;
    for (double t : times) scale = std::max(scale, std::abs(t - t0));
    if (scale == 0.0) scale = 1.0;
    MatX a(n, deg + 1);
    for (int i = 0; i < n; ++i) {
        const double u = (times[i] - t0) / scale;
        double p = 1.0;
        for (int k = 0; k <= deg; ++k) {
            a(i, k) = p;
            p *= u;
        }
    }
    // Row 0 of the pseudo-inverse: the fitted constant term, i.e. the value at t0.
    const MatX pinv = a.colPivHouseholderQr().solve(MatX::Identity(n, n));
    return pinv.row(0).transpose();
}

std::vector<double> savgol_filter(std::span<const double> x, const SavitzkyGolay& filter) {
    filter.validate();
    const int size = static_cast<int>(x.size());
    std::vector<double> out(size);
    if (size == 0) return out;
    const int n = std::min(filter.window, size);
    std::vector<double> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    // Weight vectors depend only on the target's position in the window.
    std::vector<VecX> weights(n);
    for (int p = 0; p < n; ++p) weights[p] = savgol_weights(idx, p, filter.order);
    for (int i = 0; i < size; ++i) {
        const int lo = window_start(i, n, size);
        const VecX& w = weights[i - lo];
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += w[j] * x[lo + j];
        out[i] = s;
    }
    return out;
}

void smooth_sample(const fidelity::TimedBuffer& buf, int index, const SavitzkyGolay& filter, std::span<double> out) {
    filter.validate();
    const int size = buf.size();
    if (index < 0 || index >= size) throw InvalidArgument("savitzky-golay: sample index out of range");
    const int n = std::min(filter.window, size);
    const int lo = window_start(index, n, size);
    std::vector<double> times(n);
    for (int j = 0; j < n; ++j) times[j] = buf.time_at(lo + j);
    const VecX w = savgol_weights(times, index - lo, filter.order);
    std::fill(out.begin(), out.end(), 0.0);
    for (int j = 0; j < n; ++j) {
        const auto v = buf.value_at(lo + j);
        for (int d = 0; d < buf.dim(); ++d) out[d] += w[j] * v[d];
    }
}

}  // namespace ttlab::realbridge
