#include <doctest.h>

#include <cmath>

#include "geoglove/error.hpp"
#include "geoglove/nn/grad_check.hpp"
#include "geoglove/nn/graph.hpp"
#include "geoglove/nn/layers.hpp"
#include "geoglove/nn/optim.hpp"
#include "geoglove/rng.hpp"

using namespace geoglove;
using namespace geoglove::nn;

namespace {

Tensor random_tensor(Rng& rng, std::size_t r, std::size_t c, double scale = 1.0) {
    Tensor t(r, c);
    for (auto& x : t.data()) x = scale * rng.normal();
    return t;
}

void check_close(const Tensor& a, const Tensor& b, double tol) {
    REQUIRE(a.same_shape(b));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(tol));
}

}  // namespace

TEST_CASE("tensor basics") {
    Tensor t{{1, 2, 3}, {4, 5, 6}};
    CHECK(t.rows() == 2);
    CHECK(t.cols() == 3);
    CHECK(t(1, 0) == 4);
    CHECK(Tensor::scalar(2.5).item() == 2.5);
    CHECK_THROWS_AS(Tensor(2, 2, std::vector<double>{1, 2, 3}), ShapeMismatch);
    CHECK_THROWS_AS(Tensor({{1, 2}, {3}}), ShapeMismatch);
    CHECK_THROWS(t.item());
}

TEST_CASE("dense forward") {
    Graph g;
    Var x = g.leaf(Tensor{{1, 2, 3}, {-1, 0.5, 2}});
    Var eye = g.leaf(Tensor{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    Var zero_b = g.leaf(Tensor(1, 3));
    CHECK(dense(x, eye, zero_b).value() == x.value());

    Var b = g.leaf(Tensor{{0.5, -1}});
    Var w = g.leaf(Tensor{{1, 0, 2}, {0, -1, 1}});
    Var x0 = g.leaf(Tensor(2, 3));
    CHECK(dense(x0, w, b).value() == Tensor{{0.5, -1}, {0.5, -1}});
    // Hand computed: [1,2,3]·[1,0,2] + 0.5 = 7.5; [1,2,3]·[0,-1,1] - 1 = 0; [-1,.5,2]·... = 3.5, 0.5
    CHECK(dense(x, w, b).value() == Tensor{{7.5, 0}, {3.5, 0.5}});

    CHECK_THROWS_AS(dense(x, g.leaf(Tensor(2, 2)), b), ShapeMismatch);
    CHECK_THROWS_AS(dense(x, w, g.leaf(Tensor(1, 3))), ShapeMismatch);
}

TEST_CASE("relu values and subgradient") {
    Graph g;
    Var x = g.leaf(Tensor{{-1, 0, 2}});
    Var y = relu(x);
    CHECK(y.value() == Tensor{{0, 0, 2}});
    g.backward(sum(y));
    CHECK(x.grad() == Tensor{{0, 0, 1}});
    Graph g2;
    CHECK(relu(g2.leaf(Tensor{{-3, -0.1}})).value() == Tensor{{0, 0}});
}

TEST_CASE("shared inputs accumulate gradient") {
    Graph g;
    Var x = g.leaf(Tensor{{3, -2}});
    g.backward(sum(mul(x, x)));
    CHECK(x.grad() == Tensor{{6, -4}});
}

TEST_CASE("non-finite values are rejected") {
    Graph g;
    CHECK_THROWS_AS(exp(g.leaf(Tensor{{1000.0}})), NonFiniteValue);
    CHECK_THROWS_AS(square(g.leaf(Tensor{{std::nan("")}})), NonFiniteValue);
}

TEST_CASE("lstm cell") {
    Graph g;
    const std::size_t B = 2, I = 3, H = 4;
    LstmCellVars zero{g.leaf(Tensor(4 * H, I)), g.leaf(Tensor(4 * H, H)), g.leaf(Tensor(1, 4 * H))};
    LstmState s = lstm_cell(g.leaf(Tensor(B, I)), {g.leaf(Tensor(B, H)), g.leaf(Tensor(B, H))}, zero);
    CHECK(s.h.value() == Tensor(B, H));
    CHECK(s.c.value() == Tensor(B, H));

    // Saturated forget gate: c' = c + i*g.
    Rng rng(4);
    Tensor w = random_tensor(rng, 4 * H, I, 0.3), u = random_tensor(rng, 4 * H, H, 0.3);
    Tensor bias = random_tensor(rng, 1, 4 * H, 0.3);
    for (std::size_t k = H; k < 2 * H; ++k) bias[k] = 50.0;
    const Tensor x = random_tensor(rng, B, I), h = random_tensor(rng, B, H), c = random_tensor(rng, B, H);
    Graph g2;
    LstmCellVars p{g2.leaf(w), g2.leaf(u), g2.leaf(bias)};
    LstmState out = lstm_cell(g2.leaf(x), {g2.leaf(h), g2.leaf(c)}, p);
    for (std::size_t r = 0; r < B; ++r)
        for (std::size_t j = 0; j < H; ++j) {
            double pre_i = bias[j], pre_g = bias[2 * H + j];
            for (std::size_t k = 0; k < I; ++k) {
                pre_i += x(r, k) * w(j, k);
                pre_g += x(r, k) * w(2 * H + j, k);
            }
            for (std::size_t k = 0; k < H; ++k) {
                pre_i += h(r, k) * u(j, k);
                pre_g += h(r, k) * u(2 * H + j, k);
            }
            const double expected = c(r, j) + std::tanh(pre_g) / (1.0 + std::exp(-pre_i));
            CHECK(out.c.value()(r, j) == doctest::Approx(expected).epsilon(1e-12));
        }

    CHECK_THROWS_AS(lstm_cell(g2.leaf(Tensor(B, I + 1)), {g2.leaf(h), g2.leaf(c)}, p), ShapeMismatch);
}

TEST_CASE("mse loss") {
    Graph g;
    Var a = g.leaf(Tensor{{1, 2}});
    CHECK(mse_loss(a, a).value().item() == 0.0);
    CHECK(mse_loss(a, g.leaf(Tensor(1, 2))).value().item() == 2.5);
    CHECK(mse_loss(g.leaf(Tensor{{4, 5}, {6, 7}}), g.leaf(Tensor{{1, 2}, {3, 4}})).value().item() == 9.0);
    CHECK_THROWS_AS(mse_loss(a, g.leaf(Tensor(2, 1))), ShapeMismatch);
}

TEST_CASE("gaussian kl") {
    Graph g;
    CHECK(gaussian_kl(g.leaf(Tensor(3, 2)), g.leaf(Tensor(3, 2))).value().item() == 0.0);
    CHECK(gaussian_kl(g.leaf(Tensor{{1.0}}), g.leaf(Tensor{{0.0}})).value().item() == doctest::Approx(0.5));
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
        Graph h;
        CHECK(gaussian_kl(h.leaf(random_tensor(rng, 4, 3)), h.leaf(random_tensor(rng, 4, 3))).value().item() >= 0.0);
    }
    CHECK_THROWS_AS(gaussian_kl(g.leaf(Tensor(3, 2)), g.leaf(Tensor(2, 3))), ShapeMismatch);
}

TEST_CASE("reparameterize") {
    Rng rng(2);
    const Tensor mu = random_tensor(rng, 3, 2), lv = random_tensor(rng, 3, 2);
    Graph g;
    CHECK(reparameterize(g.leaf(mu), g.leaf(lv), g.leaf(Tensor(3, 2))).value() == mu);
    const Tensor noise = random_tensor(rng, 3, 2);
    check_close(reparameterize(g.leaf(mu), g.leaf(Tensor(3, 2, -50.0)), g.leaf(noise)).value(), mu, 1e-9);

    // d/dmu is the identity.
    Graph g2;
    Var m = g2.leaf(mu);
    g2.backward(sum(reparameterize(m, g2.leaf(lv), g2.leaf(noise))));
    CHECK(m.grad() == Tensor(3, 2, 1.0));

    const ScalarFn f = [](Graph& gr, const std::vector<Var>& v) {
        return sum(square(reparameterize(v[0], v[1], v[2])));
    };
    CHECK(grad_check(f, {mu, lv, noise}).max_rel_error < 1e-4);
    CHECK_THROWS_AS(reparameterize(g.leaf(mu), g.leaf(Tensor(2, 2)), g.leaf(noise)), ShapeMismatch);
}

TEST_CASE("adam") {
    std::vector<Tensor> params{Tensor{{1.0, -2.0}}};
    AdamState st = AdamState::like(params);
    adam_step(params, std::vector<Tensor>{Tensor(1, 2)}, st);
    CHECK(params[0] == Tensor{{1.0, -2.0}});

    std::vector<Tensor> p{Tensor::scalar(0.3)};
    AdamState s2 = AdamState::like(p);
    adam_step(p, std::vector<Tensor>{Tensor::scalar(-4.0)}, s2, {0.01});
    CHECK(p[0].item() == doctest::Approx(0.31).epsilon(1e-9));
    std::vector<Tensor> q{Tensor::scalar(0.3)};
    AdamState s3 = AdamState::like(q);
    adam_step(q, std::vector<Tensor>{Tensor::scalar(1e-3)}, s3, {0.01});
    CHECK(q[0].item() == doctest::Approx(0.29).epsilon(1e-6));

    // Same inputs, same trajectory.
    auto run = [] {
        Rng rng(1);
        std::vector<Tensor> w{random_tensor(rng, 3, 3)};
        AdamState s = AdamState::like(w);
        for (int i = 0; i < 20; ++i) adam_step(w, std::vector<Tensor>{random_tensor(rng, 3, 3)}, s);
        return w[0];
    };
    CHECK(run() == run());
}

TEST_CASE("grad_check on known functions") {
    Rng rng(12);
    const ScalarFn sq = [](Graph&, const std::vector<Var>& v) { return sum(square(v[0])); };
    const auto r = grad_check(sq, {random_tensor(rng, 4, 5)});
    CHECK(r.max_rel_error < 1e-7);
    CHECK(r.checked == 20);

    const ScalarFn constant = [](Graph&, const std::vector<Var>& v) { return scale(sum(v[0]), 0.0); };
    CHECK(grad_check(constant, {random_tensor(rng, 2, 2)}).max_rel_error == 0.0);

    const Tensor x = random_tensor(rng, 3, 4);
    const auto grads = gradient(sq, {x});
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(grads[0][i] == doctest::Approx(2 * x[i]));
}

TEST_CASE("grad_check on dense + relu + mse") {
    Rng rng(21);
    const ScalarFn net = [](Graph&, const std::vector<Var>& v) {
        Var h = relu(dense(v[0], v[1], v[2]));
        return mse_loss(dense(h, v[3], v[4]), v[5]);
    };
    for (int point = 0; point < 3; ++point) {
        const auto r = grad_check(net, {random_tensor(rng, 4, 6), random_tensor(rng, 5, 6), random_tensor(rng, 1, 5),
                                        random_tensor(rng, 3, 5), random_tensor(rng, 1, 3), random_tensor(rng, 4, 3)});
        CHECK(r.max_rel_error < 1e-4);
    }
}

TEST_CASE("primitive op gradients") {
    Rng rng(33);
    const Tensor a = random_tensor(rng, 3, 4), b = random_tensor(rng, 3, 4), w = random_tensor(rng, 2, 4);
    const std::vector<std::pair<const char*, ScalarFn>> fns{
        {"sub", [](Graph&, const std::vector<Var>& v) { return sum(square(sub(v[0], v[1]))); }},
        {"mul", [](Graph&, const std::vector<Var>& v) { return sum(mul(v[0], v[1])); }},
        {"sigmoid", [](Graph&, const std::vector<Var>& v) { return sum(mul(sigmoid(v[0]), v[1])); }},
        {"tanh", [](Graph&, const std::vector<Var>& v) { return sum(mul(tanh(v[0]), v[1])); }},
        {"exp", [](Graph&, const std::vector<Var>& v) { return mean(exp(v[0])); }},
        {"row_sum", [](Graph&, const std::vector<Var>& v) { return sum(square(row_sum(mul(v[0], v[1])))); }},
        {"slice/concat",
         [](Graph&, const std::vector<Var>& v) {
             return sum(square(concat_cols({slice_cols(v[0], 1, 2), add_scalar(scale(v[1], 0.5), 1.0)})));
         }},
        {"matmul", [w](Graph& g, const std::vector<Var>& v) { return sum(square(matmul_nt(v[0], g.leaf(w)))); }},
    };
    for (const auto& [name, f] : fns) {
        CAPTURE(name);
        CHECK(grad_check(f, {a, b}).max_rel_error < 1e-6);
    }
}
