#pragma once

#include "ttlab/core/types.hpp"

namespace ttlab::trainer {

/// Streaming per-coordinate mean and variance (Welford / Chan merge).
struct RunningNorm {
    double count = 0.0;
    VecX mean;
    VecX m2;  ///< sum of squared deviations from the mean

    RunningNorm() = default;
    explicit RunningNorm(int dim) : mean(VecX::Zero(dim)), m2(VecX::Zero(dim)) {}

    int dim() const { return static_cast<int>(mean.size()); }
    void push(const VecX& x);
    /// Folds another accumulator in; order of merges affects only rounding.
    void merge(const RunningNorm& other);
    VecX variance() const;
    /// Standard deviation with coordinates of (near) zero variance mapped to 1.
    VecX scale() const;
    VecX normalize(const VecX& x) const;
    VecX denormalize(const VecX& z) const;
    void normalize_into(const VecX& x, VecX& out) const;
};

/// Merges every row of `states` into `norm`.
RunningNorm update_running_norm(RunningNorm norm, const MatX& states);

}  // namespace ttlab::trainer
