#pragma once

#include <span>
#include <vector>

#include "geoglove/nn/tensor.hpp"

namespace geoglove::nn {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::vector<Tensor> m;
    std::vector<Tensor> v;
    long step = 0;

    /// Zero moments shaped like `params`.
    static AdamState like(std::span<const Tensor> params);
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(std::span<Tensor> params, std::span<const Tensor> grads, AdamState& state, const AdamConfig& cfg = {});

}  // namespace geoglove::nn
