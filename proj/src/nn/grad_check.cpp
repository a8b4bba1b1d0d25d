#include "geoglove/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "geoglove/rng.hpp"

namespace geoglove::nn {

namespace {
Var build(Graph& g, const ScalarFn& f, const std::vector<Tensor>& point, std::vector<Var>& leaves) {
    leaves.clear();
    for (const auto& t : point) leaves.push_back(g.leaf(t));
    return f(g, leaves);
}
}  // namespace

double evaluate(const ScalarFn& f, const std::vector<Tensor>& point) {
    Graph g;
    std::vector<Var> leaves;
    return build(g, f, point, leaves).value().item();
}

std::vector<Tensor> gradient(const ScalarFn& f, const std::vector<Tensor>& point) {
    Graph g;
    std::vector<Var> leaves;
    Var out = build(g, f, point, leaves);
    g.backward(out);
    std::vector<Tensor> grads;
    for (const auto& l : leaves) grads.push_back(l.grad());
    return grads;
}

GradCheckResult grad_check(const ScalarFn& f, const std::vector<Tensor>& point, const GradCheckOptions& opts) {
    const std::vector<Tensor> analytic = gradient(f, point);

    std::vector<std::pair<std::size_t, std::size_t>> coords;
    for (std::size_t t = 0; t < point.size(); ++t)
        for (std::size_t i = 0; i < point[t].size(); ++i) coords.emplace_back(t, i);
    if (opts.max_coords && coords.size() > opts.max_coords) {
        Rng rng(opts.seed);
        rng.shuffle(coords);
        coords.resize(opts.max_coords);
        std::sort(coords.begin(), coords.end());
    }

    GradCheckResult res;
    std::vector<Tensor> probe = point;
    for (auto [t, i] : coords) {
        const double orig = probe[t][i];
        probe[t][i] = orig + opts.step;
        const double up = evaluate(f, probe);
        probe[t][i] = orig - opts.step;
        const double down = evaluate(f, probe);
        probe[t][i] = orig;

        const double numeric = (up - down) / (2.0 * opts.step);
        const double a = analytic[t][i];
        const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
        const double rel = std::abs(a - numeric) / denom;
        if (rel > res.max_rel_error || res.checked == 0) {
            res.max_rel_error = std::max(res.max_rel_error, rel);
            res.worst_tensor = t;
            res.worst_index = i;
            res.worst_analytic = a;
            res.worst_numeric = numeric;
        }
        ++res.checked;
    }
    return res;
}

}  // namespace geoglove::nn
