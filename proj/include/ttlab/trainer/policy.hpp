#pragma once

#include <string>
#include <string_view>

#include "ttlab/core/types.hpp"

namespace ttlab::trainer {

enum class PolicyArch { linear, gated_dilated_conv };
std::string_view to_string(PolicyArch a);
PolicyArch policy_arch_from_string(std::string_view s);

/// Shape of a policy. Observations are `history` frames of `feature_dim`
/// values, oldest first.
struct PolicySpec {
    PolicyArch arch = PolicyArch::linear;
    int feature_dim = 8;
    int history = 8;
    int action_dim = 5;
    int channels = 8;           ///< conv only
    std::string observation_mode = "task";

    int observation_dim() const { return feature_dim * history; }
    int parameter_count() const;
    void validate() const;
};

/// Flat parameter vector plus the architecture it belongs to.
struct PolicyParams {
    PolicySpec spec;
    VecX theta;

    /// Throws InvalidArgument when theta has the wrong size or non-finite entries.
    void validate() const;
    static PolicyParams zeros(const PolicySpec& spec);
};

/// Action for an already normalized observation. Linear: W x + b.
/// Gated dilated conv: three causal kernel-2 layers with dilations 1, 2, 4,
/// each tanh(conv_a) * sigmoid(conv_b), followed by a linear head on the
/// newest frame.
void policy_forward(const PolicySpec& spec, const VecX& theta, const VecX& obs, VecX& action);
VecX policy_forward(const PolicySpec& spec, const VecX& theta, const VecX& obs);

}  // namespace ttlab::trainer
