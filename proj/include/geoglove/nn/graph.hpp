#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "geoglove/nn/tensor.hpp"

namespace geoglove::nn {

class Graph;

/// Handle to a node of a Graph. Cheap to copy; valid while the graph lives.
struct Var {
    Graph* graph = nullptr;
    std::size_t id = 0;

    const Tensor& value() const;
    const Tensor& grad() const;
    std::size_t rows() const { return value().rows(); }
    std::size_t cols() const { return value().cols(); }
};

/// Reverse-mode tape. Nodes are appended in creation order, which is a
/// topological order; `backward` walks it in reverse exactly once.
class Graph {
public:
    using BackwardFn = std::function<void(Graph&, std::size_t self)>;

    Graph() = default;
    Graph(const Graph&) = delete;
    Graph& operator=(const Graph&) = delete;

    /// A leaf. Gradients accumulate into it like any other node.
    Var leaf(Tensor value);

    /// Appends an op node. Throws NonFiniteValue if `value` has NaN/Inf.
    Var op(const char* name, Tensor value, BackwardFn backward);

    const Tensor& value(std::size_t id) const { return nodes_[id].value; }
    /// Gradient slot, allocated as zeros on first access.
    Tensor& grad(std::size_t id);
    const Tensor& grad(std::size_t id) const;

    /// Seeds d(loss)/d(loss) = 1 and propagates. `loss` must be 1 x 1.
    void backward(Var loss);

    std::size_t size() const noexcept { return nodes_.size(); }

private:
    struct Node {
        Tensor value;
        Tensor grad;
        BackwardFn backward;
    };
    std::deque<Node> nodes_;  // stable references while the tape grows
};

// Primitive ops. All throw ShapeMismatch on incompatible operands.

/// x (B x I) times W transposed (W is O x I): B x O.
Var matmul_nt(Var x, Var w);
/// Adds a 1 x C row vector to every row.
Var add_row(Var x, Var bias);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double k);
Var add_scalar(Var a, double k);
Var relu(Var x);
Var sigmoid(Var x);
Var tanh(Var x);
Var exp(Var x);
Var square(Var x);
Var sum(Var x);
Var mean(Var x);
/// Per-row sums: B x 1.
Var row_sum(Var x);
Var slice_cols(Var x, std::size_t start, std::size_t count);
Var concat_cols(const std::vector<Var>& parts);

}  // namespace geoglove::nn
