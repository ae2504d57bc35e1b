#include "ttlab/trainer/es.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ttlab/core/errors.hpp"

namespace ttlab::trainer {

std::string_view to_string(EliteMode m) { return m == EliteMode::ars ? "ars" : "bgs"; }

EliteMode elite_mode_from_string(std::string_view s) {
    if (s == "ars") return EliteMode::ars;
    if (s == "bgs") return EliteMode::bgs;
    throw InvalidArgument("unknown elite mode '" + std::string(s) + "' (expected ars or bgs)");
}

std::vector<int> rank_elites(const std::vector<DirectionMeans>& returns, int k, EliteMode mode) {
    const int n = static_cast<int>(returns.size());
    if (k < 1 || k > n) throw InvalidArgument("rank_elites: k must lie in [1, N]");
    std::vector<double> key(n);
    for (int i = 0; i < n; ++i) {
        const auto& r = returns[i];
        key[i] = mode == EliteMode::ars ? std::max(r.plus, r.minus) : std::abs(r.plus - r.minus);
    }
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return key[a] > key[b]; });
    idx.resize(k);
    return idx;
}

double elite_return_std(const std::vector<DirectionMeans>& returns, const std::vector<int>& elites) {
    double sum = 0.0;
    for (int i : elites) sum += returns[i].plus + returns[i].minus;
    const double n = 2.0 * static_cast<double>(elites.size());
    const double mean = sum / n;
    double ss = 0.0;
    for (int i : elites) {
        ss += (returns[i].plus - mean) * (returns[i].plus - mean);
        ss += (returns[i].minus - mean) * (returns[i].minus - mean);
    }
    return std::max(std::sqrt(ss / n), 1e-8);
}

VecX update_policy(const VecX& theta, const MatX& deltas, const std::vector<DirectionMeans>& returns,
                   const std::vector<int>& elites, double alpha, double sigma_r) {
    if (deltas.cols() != theta.size()) throw InvalidArgument("update_policy: delta dimension mismatch");
    const double s = std::max(sigma_r, 1e-8);
    VecX step = VecX::Zero(theta.size());
    for (int i : elites) step += (returns[i].plus - returns[i].minus) * deltas.row(i).transpose();
    VecX out = theta + (alpha / s) * step;
    if (!out.allFinite()) {
        std::ostringstream msg;
        msg << "ES update produced non-finite parameters (alpha=" << alpha << ", sigma_r=" << s
            << ", |step|=" << step.norm() << ", elites=" << elites.size() << ")";
        throw NumericalDivergence(msg.str());
    }
    return out;
}

}  // namespace ttlab::trainer
