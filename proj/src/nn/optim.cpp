#include "geoglove/nn/optim.hpp"

#include <cmath>

#include "geoglove/error.hpp"

namespace geoglove::nn {

AdamState AdamState::like(std::span<const Tensor> params) {
    AdamState s;
    for (const auto& p : params) {
        s.m.emplace_back(p.rows(), p.cols());
        s.v.emplace_back(p.rows(), p.cols());
    }
    return s;
}

void adam_step(std::span<Tensor> params, std::span<const Tensor> grads, AdamState& state, const AdamConfig& cfg) {
    if (params.size() != grads.size() || params.size() != state.m.size())
        throw ShapeMismatch("adam_step: params, grads and state differ in length");
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(cfg.beta1, t);
    const double c2 = 1.0 - std::pow(cfg.beta2, t);
    for (std::size_t k = 0; k < params.size(); ++k) {
        Tensor& p = params[k];
        const Tensor& g = grads[k];
        Tensor& m = state.m[k];
        Tensor& v = state.v[k];
        if (!p.same_shape(g) || !p.same_shape(m)) throw ShapeMismatch("adam_step: shape mismatch in parameter " + std::to_string(k));
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
            v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
            const double mhat = m[i] / c1;
            const double vhat = v[i] / c2;
            p[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
        }
        if (!p.all_finite()) throw NonFiniteValue("adam_step produced a non-finite parameter");
    }
}

}  // namespace geoglove::nn
