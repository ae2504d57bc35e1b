#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "ttlab/core/types.hpp"

namespace ttlab::trainer {

enum class EliteMode { ars, bgs };
std::string_view to_string(EliteMode m);
EliteMode elite_mode_from_string(std::string_view s);

/// Mean returns of one direction over its repeats.
struct DirectionMeans {
    double plus = 0.0;
    double minus = 0.0;
};

/// Top-k direction indices, best first. ARS ranks by max(R+, R-), BGS by
/// |R+ - R-|; equal keys keep the lower index first.
std::vector<int> rank_elites(const std::vector<DirectionMeans>& returns, int k, EliteMode mode);

/// Population standard deviation of the 2k elite mean returns, floored at 1e-8.
double elite_return_std(const std::vector<DirectionMeans>& returns, const std::vector<int>& elites);

/// theta + alpha / sigma_r * sum_i (R+_i - R-_i) delta_i over the elites.
/// `deltas` holds one direction per row. Throws NumericalDivergence when the
/// result is not finite.
VecX update_policy(const VecX& theta, const MatX& deltas, const std::vector<DirectionMeans>& returns,
                   const std::vector<int>& elites, double alpha, double sigma_r);

}  // namespace ttlab::trainer
