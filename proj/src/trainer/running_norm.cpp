#include "ttlab/trainer/running_norm.hpp"

#include "ttlab/core/errors.hpp"

namespace ttlab::trainer {
namespace {

constexpr double kMinVariance = 1e-12;

}  // namespace

void RunningNorm::push(const VecX& x) {
    if (x.size() != dim()) throw InvalidArgument("running norm: dimension mismatch");
    count += 1.0;
    const VecX d = x - mean;
    mean += d / count;
    m2.array() += d.array() * (x - mean).array();
}

void RunningNorm::merge(const RunningNorm& other) {
    if (other.count == 0.0) return;
    if (other.dim() != dim()) throw InvalidArgument("running norm: dimension mismatch");
    if (count == 0.0) {
        *this = other;
        return;
    }
    const double n = count + other.count;
    const VecX d = other.mean - mean;
    mean += d * (other.count / n);
    m2 += other.m2 + d.cwiseProduct(d) * (count * other.count / n);
    count = n;
}

VecX RunningNorm::variance() const {
    if (count < 1.0) return VecX::Zero(dim());
    return (m2 / count).cwiseMax(0.0);
}

VecX RunningNorm::scale() const {
    VecX s = variance();
    for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = s[i] > kMinVariance ? std::sqrt(s[i]) : 1.0;
    return s;
}

VecX RunningNorm::normalize(const VecX& x) const {
    VecX out;
    normalize_into(x, out);
    return out;
}

void RunningNorm::normalize_into(const VecX& x, VecX& out) const {
    out = (x - mean).cwiseQuotient(scale());
}

VecX RunningNorm::denormalize(const VecX& z) const { return z.cwiseProduct(scale()) + mean; }

RunningNorm update_running_norm(RunningNorm norm, const MatX& states) {
    if (states.cols() != norm.dim()) throw InvalidArgument("running norm: state dimension mismatch");
    RunningNorm batch(norm.dim());
    for (Eigen::Index r = 0; r < states.rows(); ++r) batch.push(states.row(r).transpose());
    norm.merge(batch);
    return norm;
}

}  // namespace ttlab::trainer
