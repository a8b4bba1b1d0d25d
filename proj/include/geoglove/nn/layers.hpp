#pragma once

#include <utility>

#include "geoglove/nn/graph.hpp"

namespace geoglove::nn {

/// y = x W^T + b, x: B x I, W: O x I, b: 1 x O.
Var dense(Var x, Var weight, Var bias);

/// Gate order in the stacked weights: input, forget, candidate, output.
struct LstmCellVars {
    Var w;     // 4H x I
    Var u;     // 4H x H
    Var bias;  // 1 x 4H
};

struct LstmState {
    Var h;
    Var c;
};

/// c' = f*c + i*g, h' = o*tanh(c'), with sigmoid i, f, o and tanh candidate g.
LstmState lstm_cell(Var x, LstmState prev, const LstmCellVars& p);

/// Mean of (pred - target)^2 over all elements.
Var mse_loss(Var pred, Var target);

/// KL(N(mu, exp(logvar)) || N(0, 1)), summed over latent units, mean over the batch.
Var gaussian_kl(Var mu, Var logvar);

/// mu + exp(logvar / 2) * noise. The caller supplies the standard-normal draws.
Var reparameterize(Var mu, Var logvar, Var noise);

}  // namespace geoglove::nn
