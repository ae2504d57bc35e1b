#include "ttlab/trainer/policy.hpp"

#include <array>
#include <cmath>

#include "ttlab/core/errors.hpp"

namespace ttlab::trainer {
namespace {

constexpr std::array<int, 3> kDilations{1, 2, 4};
constexpr int kKernel = 2;

int conv_layer_params(int in, int out) { return 2 * (out * in * kKernel + out); }

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::string_view to_string(PolicyArch a) {
    return a == PolicyArch::linear ? "linear" : "gated_dilated_conv";
}

PolicyArch policy_arch_from_string(std::string_view s) {
    if (s == "linear") return PolicyArch::linear;
    if (s == "gated_dilated_conv") return PolicyArch::gated_dilated_conv;
    throw InvalidArgument("unknown policy architecture '" + std::string(s) + "'");
}

int PolicySpec::parameter_count() const {
    if (arch == PolicyArch::linear) return action_dim * (observation_dim() + 1);
    int n = conv_layer_params(feature_dim, channels);
    for (std::size_t l = 1; l < kDilations.size(); ++l) n += conv_layer_params(channels, channels);
    return n + action_dim * (channels + 1);
}

void PolicySpec::validate() const {
    if (feature_dim < 1 || history < 1 || action_dim < 1)
        throw InvalidArgument("policy: feature_dim, history and action_dim must be positive");
    if (arch == PolicyArch::gated_dilated_conv && channels < 1)
        throw InvalidArgument("policy: channels must be positive");
}

void PolicyParams::validate() const {
    spec.validate();
    if (theta.size() != spec.parameter_count())
        throw InvalidArgument("policy: theta has " + std::to_string(theta.size()) + " entries, architecture " +
                              std::string(to_string(spec.arch)) + " needs " +
                              std::to_string(spec.parameter_count()));
    if (!theta.allFinite()) throw InvalidArgument("policy: theta contains non-finite entries");
}

PolicyParams PolicyParams::zeros(const PolicySpec& spec) {
    spec.validate();
    return {spec, VecX::Zero(spec.parameter_count())};
}

void policy_forward(const PolicySpec& spec, const VecX& theta, const VecX& obs, VecX& action) {
    const int A = spec.action_dim;
    action.resize(A);
    if (spec.arch == PolicyArch::linear) {
        const int D = spec.observation_dim();
        const Eigen::Map<const MatX> w(theta.data(), A, D);
        action = w * obs + theta.segment(A * D, A);
        return;
    }

    const int T = spec.history;
    const int C = spec.channels;
    // Activations stored as channels x time, time oldest first.
    MatX x = Eigen::Map<const MatX>(obs.data(), spec.feature_dim, T);
    int offset = 0;
    for (int dil : kDilations) {
        const int in = static_cast<int>(x.rows());
        const auto take = [&](int rows, int cols) {
            Eigen::Map<const MatX> m(theta.data() + offset, rows, cols);
            offset += rows * cols;
            return m;
        };
        const auto wa0 = take(C, in), wa1 = take(C, in);
        const Eigen::Map<const VecX> ba(theta.data() + offset, C);
        offset += C;
        const auto wb0 = take(C, in), wb1 = take(C, in);
        const Eigen::Map<const VecX> bb(theta.data() + offset, C);
        offset += C;
        MatX y(C, T);
        for (int t = 0; t < T; ++t) {
            VecX a = wa0 * x.col(t) + ba;
            VecX b = wb0 * x.col(t) + bb;
            if (t - dil >= 0) {
                a += wa1 * x.col(t - dil);
                b += wb1 * x.col(t - dil);
            }
            for (int c = 0; c < C; ++c) y(c, t) = std::tanh(a[c]) * sigmoid(b[c]);
        }
        x = std::move(y);
    }
    const Eigen::Map<const MatX> head(theta.data() + offset, A, C);
    action = head * x.col(T - 1) + theta.segment(offset + A * C, A);
}

VecX policy_forward(const PolicySpec& spec, const VecX& theta, const VecX& obs) {
    VecX a;
    policy_forward(spec, theta, obs, a);
    return a;
}

}  // namespace ttlab::trainer
