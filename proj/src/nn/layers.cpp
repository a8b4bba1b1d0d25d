#include "geoglove/nn/layers.hpp"

#include <string>

#include "geoglove/error.hpp"

namespace geoglove::nn {

Var dense(Var x, Var weight, Var bias) { return add_row(matmul_nt(x, weight), bias); }

LstmState lstm_cell(Var x, LstmState prev, const LstmCellVars& p) {
    const std::size_t H = prev.h.cols();
    if (p.w.rows() != 4 * H || p.u.rows() != 4 * H || p.u.cols() != H || p.bias.cols() != 4 * H ||
        p.bias.rows() != 1 || prev.c.cols() != H || prev.c.rows() != prev.h.rows() || x.rows() != prev.h.rows() ||
        p.w.cols() != x.cols())
        throw ShapeMismatch("lstm_cell: parameter shapes do not match input " + std::to_string(x.cols()) +
                            " / hidden " + std::to_string(H));
    Var z = add(dense(x, p.w, p.bias), matmul_nt(prev.h, p.u));
    Var i = sigmoid(slice_cols(z, 0, H));
    Var f = sigmoid(slice_cols(z, H, H));
    Var g = tanh(slice_cols(z, 2 * H, H));
    Var o = sigmoid(slice_cols(z, 3 * H, H));
    Var c = add(mul(f, prev.c), mul(i, g));
    Var h = mul(o, tanh(c));
    return {h, c};
}

Var mse_loss(Var pred, Var target) {
    if (!pred.value().same_shape(target.value())) throw ShapeMismatch("mse_loss: prediction and target shapes differ");
    return mean(square(sub(pred, target)));
}

Var gaussian_kl(Var mu, Var logvar) {
    if (!mu.value().same_shape(logvar.value())) throw ShapeMismatch("gaussian_kl: mu and logvar shapes differ");
    // -0.5 * sum(1 + logvar - mu^2 - exp(logvar)) / B
    Var inner = sub(sub(add_scalar(logvar, 1.0), square(mu)), exp(logvar));
    return scale(sum(inner), -0.5 / static_cast<double>(mu.rows()));
}

Var reparameterize(Var mu, Var logvar, Var noise) {
    if (!mu.value().same_shape(logvar.value()) || !mu.value().same_shape(noise.value()))
        throw ShapeMismatch("reparameterize: mu, logvar and noise shapes differ");
    return add(mu, mul(exp(scale(logvar, 0.5)), noise));
}

}  // namespace geoglove::nn
