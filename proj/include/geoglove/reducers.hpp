#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geoglove/glove.hpp"
#include "geoglove/nn/graph.hpp"
#include "geoglove/nn/tensor.hpp"

namespace geoglove {

enum class ReducerKind { None, Pca, Autoencoder, Vae, VaeLstm };

/// "none", "pca", "ae", "vae", "vae-lstm".
std::string_view kind_name(ReducerKind kind);
/// Throws ConfigError on an unknown name.
ReducerKind parse_kind(std::string_view name);
/// Human-readable technique label used in benchmark summaries.
std::string_view technique_label(ReducerKind kind);
const std::vector<ReducerKind>& all_kinds();

struct ReducerSpec {
    ReducerKind kind = ReducerKind::None;
    std::size_t latent_dim = 2;
    std::vector<std::size_t> hidden_dims{128, 64, 32, 16, 8};
    int epochs = 200;
    std::size_t batch_size = 256;
    double lr = 1e-3;
    std::uint64_t seed = 0;
    double kl_weight = 1.0;
    std::size_t lstm_steps = 25;
    std::size_t lstm_features = 8;
    std::size_t lstm_hidden = 64;

    /// Throws ConfigError when the spec cannot be fitted to `input_dim` columns.
    void validate(std::size_t input_dim) const;
};

struct TraceRow {
    int epoch = 0;
    double loss = 0.0;
    double recon = 0.0;
    double kl = 0.0;
};

struct NamedTensor {
    std::string name;
    nn::Tensor value;
};

struct ReducerModel {
    ReducerSpec spec;
    std::size_t input_dim = 0;
    std::vector<NamedTensor> params;
    std::vector<TraceRow> trace;
    /// PCA only: covariance rank was below latent_dim and components were padded.
    bool degenerate = false;

    std::size_t output_dim() const { return spec.kind == ReducerKind::None ? input_dim : spec.latent_dim; }
    const nn::Tensor& param(std::string_view name) const;
    std::vector<nn::Tensor> param_values() const;
    void set_param_values(std::vector<nn::Tensor> values);
};

/// V x dim matrix of the table's vectors.
nn::Tensor table_matrix(const EmbeddingTable& table);

// --- PCA -------------------------------------------------------------------

struct SymmetricEigen {
    std::vector<double> values;  // descending
    nn::Tensor vectors;          // column k is the eigenvector of values[k]
    int sweeps = 0;
};

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix; iterates until the
/// largest off-diagonal magnitude is below tol * max(1, max |a_ij|).
SymmetricEigen jacobi_eigen(const nn::Tensor& symmetric, double tol = 1e-12, int max_sweeps = 100);

/// Sample covariance (N - 1 denominator; zeros when N < 2).
nn::Tensor covariance(const nn::Tensor& data);

ReducerModel fit_pca(const nn::Tensor& data, const ReducerSpec& spec);

// --- Networks ----------------------------------------------------------------

/// Seeded initial parameters for a network kind.
ReducerModel init_network(const ReducerSpec& spec, std::size_t input_dim);

struct NetworkLoss {
    nn::Var total;
    nn::Var recon;
    std::optional<nn::Var> kl;
};

/// Builds the training loss. `params` are leaves for `model.params` in order;
/// `noise` (B x latent) is required for the VAE kinds.
NetworkLoss network_loss(nn::Graph& g, const ReducerModel& model, const std::vector<nn::Var>& params, nn::Var input,
                         std::optional<nn::Var> noise);

/// Reconstruction through the deterministic path (mu for the VAE kinds).
nn::Var network_reconstruct(nn::Graph& g, const ReducerModel& model, const std::vector<nn::Var>& params, nn::Var input);

/// Mean squared reconstruction error over all rows of `data`.
double reconstruction_mse(const ReducerModel& model, const nn::Tensor& data);

ReducerModel fit_autoencoder(const nn::Tensor& data, const ReducerSpec& spec);
ReducerModel fit_vae(const nn::Tensor& data, const ReducerSpec& spec);
ReducerModel fit_vae_lstm(const nn::Tensor& data, const ReducerSpec& spec);

/// Dispatches on spec.kind; kind none yields a parameterless identity model.
ReducerModel fit_reducer(const nn::Tensor& data, const ReducerSpec& spec);
ReducerModel fit_reducer(const EmbeddingTable& table, const ReducerSpec& spec);

/// Maps N x input_dim vectors to N x output_dim. Deterministic.
nn::Tensor transform(const ReducerModel& model, const nn::Tensor& vectors);

// --- Files -------------------------------------------------------------------

std::string format_model(const ReducerModel& model);
/// Throws ParseError, or KindMismatch when `expected` differs from the file.
ReducerModel parse_model(const std::string& text, std::optional<ReducerKind> expected = std::nullopt);
void save_model(const ReducerModel& model, const std::filesystem::path& path);
ReducerModel load_model(const std::filesystem::path& path, std::optional<ReducerKind> expected = std::nullopt);

/// CSV `epoch,loss,recon,kl`.
std::string format_trace(const std::vector<TraceRow>& trace);

}  // namespace geoglove
