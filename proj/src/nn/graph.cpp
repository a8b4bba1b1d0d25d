#include "geoglove/nn/graph.hpp"

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "geoglove/error.hpp"

namespace geoglove::nn {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using CMapMat = Eigen::Map<const RowMat>;

MapMat map(Tensor& t) { return MapMat(t.data().data(), Eigen::Index(t.rows()), Eigen::Index(t.cols())); }
CMapMat map(const Tensor& t) {
    return CMapMat(t.data().data(), Eigen::Index(t.rows()), Eigen::Index(t.cols()));
}

std::string shape_str(const Tensor& t) { return std::to_string(t.rows()) + "x" + std::to_string(t.cols()); }

void require_same(const char* op, Var a, Var b) {
    if (a.graph != b.graph) throw ShapeMismatch(std::string(op) + ": operands belong to different graphs");
    if (!a.value().same_shape(b.value()))
        throw ShapeMismatch(std::string(op) + ": " + shape_str(a.value()) + " vs " + shape_str(b.value()));
}

// Elementwise unary op with derivative expressed through (input, output).
template <typename F, typename DF>
Var unary(const char* name, Var x, F f, DF df) {
    Graph& g = *x.graph;
    Tensor out = x.value();
    for (auto& v : out.data()) v = f(v);
    const std::size_t xi = x.id;
    return g.op(name, std::move(out), [xi, df](Graph& g, std::size_t self) {
        const Tensor& in = g.value(xi);
        const Tensor& y = g.value(self);
        const Tensor& gy = g.grad(self);
        Tensor& gx = g.grad(xi);
        for (std::size_t i = 0; i < in.size(); ++i) gx[i] += gy[i] * df(in[i], y[i]);
    });
}

}  // namespace

const Tensor& Var::value() const { return graph->value(id); }
const Tensor& Var::grad() const { return static_cast<const Graph*>(graph)->grad(id); }

Var Graph::leaf(Tensor value) {
    nodes_.push_back({std::move(value), Tensor(), nullptr});
    return {this, nodes_.size() - 1};
}

Var Graph::op(const char* name, Tensor value, BackwardFn backward) {
    if (!value.all_finite()) throw NonFiniteValue(std::string("non-finite output from ") + name);
    nodes_.push_back({std::move(value), Tensor(), std::move(backward)});
    return {this, nodes_.size() - 1};
}

Tensor& Graph::grad(std::size_t id) {
    Node& n = nodes_[id];
    if (!n.grad.same_shape(n.value) || n.grad.size() != n.value.size()) n.grad = Tensor(n.value.rows(), n.value.cols());
    return n.grad;
}

const Tensor& Graph::grad(std::size_t id) const {
    const Node& n = nodes_[id];
    if (n.grad.size() != n.value.size()) throw Error("gradient not computed for node " + std::to_string(id));
    return n.grad;
}

void Graph::backward(Var loss) {
    if (loss.graph != this) throw Error("backward: loss belongs to another graph");
    if (loss.value().size() != 1) throw ShapeMismatch("backward: loss must be a scalar, got " + shape_str(loss.value()));
    for (std::size_t i = 0; i <= loss.id; ++i) grad(i).fill(0.0);
    grad(loss.id)[0] = 1.0;
    for (std::size_t i = loss.id + 1; i-- > 0;)
        if (nodes_[i].backward) nodes_[i].backward(*this, i);
}

// ---------------------------------------------------------------------------

Var matmul_nt(Var x, Var w) {
    if (x.graph != w.graph) throw ShapeMismatch("matmul_nt: operands belong to different graphs");
    const Tensor& xv = x.value();
    const Tensor& wv = w.value();
    if (xv.cols() != wv.cols())
        throw ShapeMismatch("matmul_nt: " + shape_str(xv) + " times transpose of " + shape_str(wv));
    Tensor out(xv.rows(), wv.rows());
    map(out).noalias() = map(xv) * map(wv).transpose();
    const std::size_t xi = x.id, wi = w.id;
    return x.graph->op("matmul", std::move(out), [xi, wi](Graph& g, std::size_t self) {
        const Tensor& gy = g.grad(self);
        map(g.grad(xi)).noalias() += map(gy) * map(g.value(wi));
        map(g.grad(wi)).noalias() += map(gy).transpose() * map(g.value(xi));
    });
}

Var add_row(Var x, Var bias) {
    const Tensor& xv = x.value();
    const Tensor& bv = bias.value();
    if (x.graph != bias.graph || bv.rows() != 1 || bv.cols() != xv.cols())
        throw ShapeMismatch("add_row: " + shape_str(xv) + " + " + shape_str(bv));
    Tensor out = xv;
    for (std::size_t r = 0; r < out.rows(); ++r)
        for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) += bv[c];
    const std::size_t xi = x.id, bi = bias.id;
    return x.graph->op("add_row", std::move(out), [xi, bi](Graph& g, std::size_t self) {
        const Tensor& gy = g.grad(self);
        Tensor& gx = g.grad(xi);
        Tensor& gb = g.grad(bi);
        for (std::size_t r = 0; r < gy.rows(); ++r)
            for (std::size_t c = 0; c < gy.cols(); ++c) {
                gx(r, c) += gy(r, c);
                gb[c] += gy(r, c);
            }
    });
}

Var add(Var a, Var b) {
    require_same("add", a, b);
    Tensor out = a.value();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.value()[i];
    const std::size_t ai = a.id, bi = b.id;
    return a.graph->op("add", std::move(out), [ai, bi](Graph& g, std::size_t self) {
        const Tensor& gy = g.grad(self);
        map(g.grad(ai)) += map(gy);
        map(g.grad(bi)) += map(gy);
    });
}

Var sub(Var a, Var b) {
    require_same("sub", a, b);
    Tensor out = a.value();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.value()[i];
    const std::size_t ai = a.id, bi = b.id;
    return a.graph->op("sub", std::move(out), [ai, bi](Graph& g, std::size_t self) {
        const Tensor& gy = g.grad(self);
        map(g.grad(ai)) += map(gy);
        map(g.grad(bi)) -= map(gy);
    });
}

Var mul(Var a, Var b) {
    require_same("mul", a, b);
    Tensor out = a.value();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b.value()[i];
    const std::size_t ai = a.id, bi = b.id;
    return a.graph->op("mul", std::move(out), [ai, bi](Graph& g, std::size_t self) {
        const Tensor& gy = g.grad(self);
        const Tensor& av = g.value(ai);
        const Tensor& bv = g.value(bi);
        Tensor& ga = g.grad(ai);
        Tensor& gb = g.grad(bi);
        for (std::size_t i = 0; i < gy.size(); ++i) {
            ga[i] += gy[i] * bv[i];
            gb[i] += gy[i] * av[i];
        }
    });
}

Var scale(Var a, double k) {
    return unary("scale", a, [k](double v) { return k * v; }, [k](double, double) { return k; });
}

Var add_scalar(Var a, double k) {
    return unary("add_scalar", a, [k](double v) { return v + k; }, [](double, double) { return 1.0; });
}

Var relu(Var x) {
    return unary("relu", x, [](double v) { return v > 0.0 ? v : 0.0; },
                 [](double in, double) { return in > 0.0 ? 1.0 : 0.0; });
}

Var sigmoid(Var x) {
    return unary("sigmoid", x,
                 [](double v) {
                     // Split by sign so exp never overflows.
                     if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
                     const double e = std::exp(v);
                     return e / (1.0 + e);
                 },
                 [](double, double y) { return y * (1.0 - y); });
}

Var tanh(Var x) {
    return unary("tanh", x, [](double v) { return std::tanh(v); }, [](double, double y) { return 1.0 - y * y; });
}

Var exp(Var x) {
    return unary("exp", x, [](double v) { return std::exp(v); }, [](double, double y) { return y; });
}

Var square(Var x) {
    return unary("square", x, [](double v) { return v * v; }, [](double in, double) { return 2.0 * in; });
}

Var sum(Var x) {
    double s = 0.0;
    for (double v : x.value().data()) s += v;
    const std::size_t xi = x.id;
    return x.graph->op("sum", Tensor::scalar(s), [xi](Graph& g, std::size_t self) {
        const double gy = g.grad(self)[0];
        for (auto& v : g.grad(xi).data()) v += gy;
    });
}

Var mean(Var x) {
    const std::size_t n = x.value().size();
    if (n == 0) throw ShapeMismatch("mean of an empty tensor");
    return scale(sum(x), 1.0 / static_cast<double>(n));
}

Var row_sum(Var x) {
    const Tensor& xv = x.value();
    Tensor out(xv.rows(), 1);
    for (std::size_t r = 0; r < xv.rows(); ++r)
        for (std::size_t c = 0; c < xv.cols(); ++c) out[r] += xv(r, c);
    const std::size_t xi = x.id;
    return x.graph->op("row_sum", std::move(out), [xi](Graph& g, std::size_t self) {
        const Tensor& gy = g.grad(self);
        Tensor& gx = g.grad(xi);
        for (std::size_t r = 0; r < gx.rows(); ++r)
            for (std::size_t c = 0; c < gx.cols(); ++c) gx(r, c) += gy[r];
    });
}

Var slice_cols(Var x, std::size_t start, std::size_t count) {
    const Tensor& xv = x.value();
    if (start + count > xv.cols())
        throw ShapeMismatch("slice_cols: [" + std::to_string(start) + ", " + std::to_string(start + count) +
                            ") outside " + shape_str(xv));
    Tensor out(xv.rows(), count);
    for (std::size_t r = 0; r < xv.rows(); ++r)
        for (std::size_t c = 0; c < count; ++c) out(r, c) = xv(r, start + c);
    const std::size_t xi = x.id;
    return x.graph->op("slice_cols", std::move(out), [xi, start](Graph& g, std::size_t self) {
        const Tensor& gy = g.grad(self);
        Tensor& gx = g.grad(xi);
        for (std::size_t r = 0; r < gy.rows(); ++r)
            for (std::size_t c = 0; c < gy.cols(); ++c) gx(r, start + c) += gy(r, c);
    });
}

Var concat_cols(const std::vector<Var>& parts) {
    if (parts.empty()) throw ShapeMismatch("concat_cols: no operands");
    const std::size_t rows = parts[0].rows();
    std::size_t cols = 0;
    for (const auto& p : parts) {
        if (p.graph != parts[0].graph || p.rows() != rows) throw ShapeMismatch("concat_cols: row count mismatch");
        cols += p.cols();
    }
    Tensor out(rows, cols);
    std::vector<std::size_t> ids, offsets;
    std::size_t off = 0;
    for (const auto& p : parts) {
        const Tensor& pv = p.value();
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < pv.cols(); ++c) out(r, off + c) = pv(r, c);
        ids.push_back(p.id);
        offsets.push_back(off);
        off += pv.cols();
    }
    return parts[0].graph->op("concat_cols", std::move(out),
                              [ids = std::move(ids), offsets = std::move(offsets)](Graph& g, std::size_t self) {
                                  const Tensor& gy = g.grad(self);
                                  for (std::size_t k = 0; k < ids.size(); ++k) {
                                      Tensor& gp = g.grad(ids[k]);
                                      for (std::size_t r = 0; r < gp.rows(); ++r)
                                          for (std::size_t c = 0; c < gp.cols(); ++c)
                                              gp(r, c) += gy(r, offsets[k] + c);
                                  }
                              });
}

}  // namespace geoglove::nn
