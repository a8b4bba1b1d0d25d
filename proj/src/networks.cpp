#include <algorithm>
#include <cmath>
#include <numeric>

#include "geoglove/error.hpp"
#include "geoglove/nn/layers.hpp"
#include "geoglove/nn/optim.hpp"
#include "geoglove/reducers.hpp"
#include "geoglove/rng.hpp"

namespace geoglove {

using nn::Graph;
using nn::Tensor;
using nn::Var;

namespace {

// Parameter leaves looked up by name in model order.
class ParamView {
public:
    ParamView(const ReducerModel& m, const std::vector<Var>& vars) : model_(m), vars_(vars) {
        if (vars.size() != m.params.size()) throw ShapeMismatch("parameter leaf count does not match model");
    }
    Var operator()(std::string_view name) const {
        for (std::size_t i = 0; i < model_.params.size(); ++i)
            if (model_.params[i].name == name) return vars_[i];
        throw Error("model has no parameter '" + std::string(name) + "'");
    }
    Var dense(Var x, const std::string& layer) const { return nn::dense(x, (*this)(layer + ".w"), (*this)(layer + ".b")); }

private:
    const ReducerModel& model_;
    const std::vector<Var>& vars_;
};

void add_dense(ReducerModel& m, Rng& rng, const std::string& name, std::size_t in, std::size_t out) {
    // Glorot uniform.
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    Tensor w(out, in);
    for (auto& v : w.data()) v = rng.uniform(-limit, limit);
    m.params.push_back({name + ".w", std::move(w)});
    m.params.push_back({name + ".b", Tensor(1, out)});
}

void add_lstm(ReducerModel& m, Rng& rng, const std::string& name, std::size_t in, std::size_t hidden) {
    const double limit = 1.0 / std::sqrt(static_cast<double>(hidden));
    Tensor w(4 * hidden, in), u(4 * hidden, hidden), b(1, 4 * hidden);
    for (auto& v : w.data()) v = rng.uniform(-limit, limit);
    for (auto& v : u.data()) v = rng.uniform(-limit, limit);
    for (std::size_t k = hidden; k < 2 * hidden; ++k) b[k] = 1.0;  // forget gate
    m.params.push_back({name + ".w", std::move(w)});
    m.params.push_back({name + ".u", std::move(u)});
    m.params.push_back({name + ".b", std::move(b)});
}

nn::LstmCellVars lstm_vars(const ParamView& p, const std::string& name) {
    return {p(name + ".w"), p(name + ".u"), p(name + ".b")};
}

Var zeros(Graph& g, std::size_t rows, std::size_t cols) { return g.leaf(Tensor(rows, cols)); }

// Encoder trunk shared by AE and VAE: ReLU after every hidden layer.
Var mlp_trunk(const ParamView& p, const ReducerSpec& s, Var x) {
    for (std::size_t k = 0; k < s.hidden_dims.size(); ++k) x = nn::relu(p.dense(x, "enc" + std::to_string(k)));
    return x;
}

Var mlp_decoder(const ParamView& p, const ReducerSpec& s, Var z) {
    const std::size_t layers = s.hidden_dims.size();
    for (std::size_t k = 0; k < layers; ++k) z = nn::relu(p.dense(z, "dec" + std::to_string(k)));
    return p.dense(z, "dec" + std::to_string(layers));
}

Var lstm_encoder(Graph& g, const ParamView& p, const ReducerSpec& s, Var x) {
    const auto cell = lstm_vars(p, "enc_lstm");
    nn::LstmState st{zeros(g, x.rows(), s.lstm_hidden), zeros(g, x.rows(), s.lstm_hidden)};
    for (std::size_t t = 0; t < s.lstm_steps; ++t)
        st = nn::lstm_cell(nn::slice_cols(x, t * s.lstm_features, s.lstm_features), st, cell);
    return st.h;
}

Var lstm_decoder(const ParamView& p, const ReducerSpec& s, Var z) {
    const std::size_t H = s.lstm_hidden;
    Var init = p.dense(z, "dec_init");
    nn::LstmState st{nn::tanh(nn::slice_cols(init, 0, H)), nn::slice_cols(init, H, H)};
    const auto cell = lstm_vars(p, "dec_lstm");
    std::vector<Var> steps;
    for (std::size_t t = 0; t < s.lstm_steps; ++t) {
        st = nn::lstm_cell(z, st, cell);
        steps.push_back(p.dense(st.h, "dec_out"));
    }
    return nn::concat_cols(steps);
}

struct Encoded {
    Var mu;
    std::optional<Var> logvar;
};

Encoded encode(Graph& g, const ParamView& p, const ReducerModel& m, Var x) {
    const ReducerSpec& s = m.spec;
    switch (s.kind) {
        case ReducerKind::Autoencoder: {
            Var h = mlp_trunk(p, s, x);
            return {p.dense(h, "enc" + std::to_string(s.hidden_dims.size())), std::nullopt};
        }
        case ReducerKind::Vae: {
            Var h = mlp_trunk(p, s, x);
            return {p.dense(h, "mu"), p.dense(h, "logvar")};
        }
        case ReducerKind::VaeLstm: {
            Var h = lstm_encoder(g, p, s, x);
            return {p.dense(h, "mu"), p.dense(h, "logvar")};
        }
        default:
            throw ConfigError("not a network reducer: " + std::string(kind_name(s.kind)));
    }
}

Var decode(const ParamView& p, const ReducerModel& m, Var z) {
    return m.spec.kind == ReducerKind::VaeLstm ? lstm_decoder(p, m.spec, z) : mlp_decoder(p, m.spec, z);
}

Tensor rows_of(const Tensor& data, const std::vector<std::size_t>& idx, std::size_t begin, std::size_t end) {
    Tensor out(end - begin, data.cols());
    for (std::size_t r = begin; r < end; ++r)
        std::copy_n(data.data().begin() + static_cast<std::ptrdiff_t>(idx[r] * data.cols()), data.cols(),
                    out.data().begin() + static_cast<std::ptrdiff_t>((r - begin) * data.cols()));
    return out;
}

bool is_variational(ReducerKind k) { return k == ReducerKind::Vae || k == ReducerKind::VaeLstm; }

ReducerModel fit_network(const Tensor& data, const ReducerSpec& spec) {
    ReducerModel model = init_network(spec, data.cols());
    const std::size_t n = data.rows();
    if (n == 0) throw ConfigError("cannot fit a network on zero vectors");
    const std::size_t batch = std::max<std::size_t>(1, spec.batch_size);

    std::vector<Tensor> values = model.param_values();
    nn::AdamState adam = nn::AdamState::like(values);
    const nn::AdamConfig adam_cfg{spec.lr};
    Rng order_rng(derive_seed(spec.seed, "reducer.order"));
    Rng noise_rng(derive_seed(spec.seed, "reducer.noise"));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int epoch = 1; epoch <= spec.epochs; ++epoch) {
        order_rng.shuffle(order);
        TraceRow row{epoch, 0.0, 0.0, 0.0};
        for (std::size_t begin = 0; begin < n; begin += batch) {
            const std::size_t end = std::min(n, begin + batch);
            Graph g;
            std::vector<Var> leaves;
            for (const auto& v : values) leaves.push_back(g.leaf(v));
            Var x = g.leaf(rows_of(data, order, begin, end));
            std::optional<Var> noise;
            if (is_variational(spec.kind)) {
                Tensor eps(end - begin, spec.latent_dim);
                for (auto& e : eps.data()) e = noise_rng.normal();
                noise = g.leaf(std::move(eps));
            }
            NetworkLoss loss = network_loss(g, model, leaves, x, noise);
            g.backward(loss.total);

            const double w = static_cast<double>(end - begin) / static_cast<double>(n);
            row.loss += w * loss.total.value().item();
            row.recon += w * loss.recon.value().item();
            if (loss.kl) row.kl += w * loss.kl->value().item();

            std::vector<Tensor> grads;
            grads.reserve(leaves.size());
            for (const auto& l : leaves) grads.push_back(l.grad());
            nn::adam_step(values, grads, adam, adam_cfg);
        }
        if (!std::isfinite(row.loss)) throw NonFiniteValue("training loss diverged in epoch " + std::to_string(epoch));
        model.trace.push_back(row);
    }
    model.set_param_values(std::move(values));
    return model;
}

}  // namespace

ReducerModel init_network(const ReducerSpec& spec, std::size_t input_dim) {
    spec.validate(input_dim);
    ReducerModel m;
    m.spec = spec;
    m.input_dim = input_dim;
    Rng rng(derive_seed(spec.seed, "reducer.init"));
    const auto& hd = spec.hidden_dims;
    const std::size_t L = spec.latent_dim;

    auto add_mlp_decoder = [&] {
        std::size_t prev = L;
        for (std::size_t k = 0; k < hd.size(); ++k) {
            const std::size_t out = hd[hd.size() - 1 - k];
            add_dense(m, rng, "dec" + std::to_string(k), prev, out);
            prev = out;
        }
        add_dense(m, rng, "dec" + std::to_string(hd.size()), prev, input_dim);
    };

    switch (spec.kind) {
        case ReducerKind::Autoencoder: {
            std::size_t prev = input_dim;
            for (std::size_t k = 0; k < hd.size(); ++k) {
                add_dense(m, rng, "enc" + std::to_string(k), prev, hd[k]);
                prev = hd[k];
            }
            add_dense(m, rng, "enc" + std::to_string(hd.size()), prev, L);
            add_mlp_decoder();
            break;
        }
        case ReducerKind::Vae: {
            std::size_t prev = input_dim;
            for (std::size_t k = 0; k < hd.size(); ++k) {
                add_dense(m, rng, "enc" + std::to_string(k), prev, hd[k]);
                prev = hd[k];
            }
            add_dense(m, rng, "mu", prev, L);
            add_dense(m, rng, "logvar", prev, L);
            add_mlp_decoder();
            break;
        }
        case ReducerKind::VaeLstm: {
            const std::size_t H = spec.lstm_hidden;
            add_lstm(m, rng, "enc_lstm", spec.lstm_features, H);
            add_dense(m, rng, "mu", H, L);
            add_dense(m, rng, "logvar", H, L);
            add_dense(m, rng, "dec_init", L, 2 * H);
            add_lstm(m, rng, "dec_lstm", L, H);
            add_dense(m, rng, "dec_out", H, spec.lstm_features);
            break;
        }
        default:
            throw ConfigError("not a network reducer: " + std::string(kind_name(spec.kind)));
    }
    return m;
}

NetworkLoss network_loss(Graph& g, const ReducerModel& model, const std::vector<Var>& params, Var input,
                         std::optional<Var> noise) {
    const ParamView p(model, params);
    const Encoded enc = encode(g, p, model, input);
    if (!enc.logvar) {
        Var recon = nn::mse_loss(decode(p, model, enc.mu), input);
        return {recon, recon, std::nullopt};
    }
    if (!noise) throw ShapeMismatch("variational loss needs a noise operand");
    Var z = nn::reparameterize(enc.mu, *enc.logvar, *noise);
    Var recon = nn::mse_loss(decode(p, model, z), input);
    Var kl = nn::gaussian_kl(enc.mu, *enc.logvar);
    Var total = nn::add(recon, nn::scale(kl, model.spec.kl_weight));
    return {total, recon, kl};
}

Var network_reconstruct(Graph& g, const ReducerModel& model, const std::vector<Var>& params, Var input) {
    const ParamView p(model, params);
    return decode(p, model, encode(g, p, model, input).mu);
}

Tensor network_encode(const ReducerModel& model, const Tensor& vectors) {
    Graph g;
    std::vector<Var> leaves;
    for (const auto& np : model.params) leaves.push_back(g.leaf(np.value));
    const ParamView p(model, leaves);
    return encode(g, p, model, g.leaf(vectors)).mu.value();
}

double reconstruction_mse(const ReducerModel& model, const Tensor& data) {
    constexpr std::size_t chunk = 1024;
    double total = 0.0;
    std::vector<std::size_t> idx(data.rows());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t begin = 0; begin < data.rows(); begin += chunk) {
        const std::size_t end = std::min(data.rows(), begin + chunk);
        Graph g;
        std::vector<Var> leaves;
        for (const auto& np : model.params) leaves.push_back(g.leaf(np.value));
        Var x = g.leaf(rows_of(data, idx, begin, end));
        Var r = network_reconstruct(g, model, leaves, x);
        total += nn::sum(nn::square(nn::sub(r, x))).value().item();
    }
    return total / static_cast<double>(data.size());
}

ReducerModel fit_autoencoder(const Tensor& data, const ReducerSpec& spec) {
    ReducerSpec s = spec;
    s.kind = ReducerKind::Autoencoder;
    return fit_network(data, s);
}

ReducerModel fit_vae(const Tensor& data, const ReducerSpec& spec) {
    ReducerSpec s = spec;
    s.kind = ReducerKind::Vae;
    return fit_network(data, s);
}

ReducerModel fit_vae_lstm(const Tensor& data, const ReducerSpec& spec) {
    ReducerSpec s = spec;
    s.kind = ReducerKind::VaeLstm;
    return fit_network(data, s);
}

}  // namespace geoglove
