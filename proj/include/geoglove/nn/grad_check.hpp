#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "geoglove/nn/graph.hpp"

namespace geoglove::nn {

/// Builds a scalar from one leaf per input tensor.
using ScalarFn = std::function<Var(Graph&, const std::vector<Var>&)>;

struct GradCheckOptions {
    double step = 1e-5;
    /// Check at most this many coordinates, chosen by a seeded draw; 0 checks all.
    std::size_t max_coords = 0;
    std::uint64_t seed = 0;
};

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::size_t worst_tensor = 0;
    std::size_t worst_index = 0;
    double worst_analytic = 0.0;
    double worst_numeric = 0.0;
    std::size_t checked = 0;
};

double evaluate(const ScalarFn& f, const std::vector<Tensor>& point);

/// Reverse-mode gradient at `point`, one tensor per input.
std::vector<Tensor> gradient(const ScalarFn& f, const std::vector<Tensor>& point);

/// Compares reverse-mode gradients to central differences. Relative error is
/// |a - n| / max(|a|, |n|, 1e-8).
GradCheckResult grad_check(const ScalarFn& f, const std::vector<Tensor>& point, const GradCheckOptions& opts = {});

}  // namespace geoglove::nn
