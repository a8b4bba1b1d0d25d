#include "geoglove/reducers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geoglove/error.hpp"
#include "geoglove/io.hpp"

namespace geoglove {

using nn::Tensor;

// Defined in networks.cpp.
Tensor network_encode(const ReducerModel& model, const Tensor& vectors);

namespace {
struct KindInfo {
    ReducerKind kind;
    std::string_view name;
    std::string_view label;
};
constexpr KindInfo kKinds[] = {
    {ReducerKind::None, "none", "No Dimensionality Reduction"},
    {ReducerKind::Pca, "pca", "PCA"},
    {ReducerKind::Autoencoder, "ae", "Autoencoder"},
    {ReducerKind::Vae, "vae", "Variational Autoencoder(VAE)"},
    {ReducerKind::VaeLstm, "vae-lstm", "VAE with LSTM"},
};

const KindInfo& info(ReducerKind k) {
    for (const auto& i : kKinds)
        if (i.kind == k) return i;
    throw ConfigError("unknown reducer kind");
}
}  // namespace

std::string_view kind_name(ReducerKind kind) { return info(kind).name; }
std::string_view technique_label(ReducerKind kind) { return info(kind).label; }

ReducerKind parse_kind(std::string_view name) {
    for (const auto& i : kKinds)
        if (i.name == name) return i.kind;
    throw ConfigError("unknown reducer kind '" + std::string(name) + "' (expected none, pca, ae, vae or vae-lstm)");
}

const std::vector<ReducerKind>& all_kinds() {
    static const std::vector<ReducerKind> kinds{ReducerKind::None, ReducerKind::Pca, ReducerKind::Autoencoder,
                                                ReducerKind::Vae, ReducerKind::VaeLstm};
    return kinds;
}

void ReducerSpec::validate(std::size_t input_dim) const {
    if (latent_dim < 1) throw ConfigError("latent_dim must be >= 1");
    if (kind == ReducerKind::None) return;
    if (input_dim < latent_dim) throw ConfigError("input dimension is smaller than latent_dim");
    if (kind == ReducerKind::Pca) return;
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
    if (!(lr > 0.0)) throw ConfigError("lr must be > 0");
    if (kl_weight < 0.0) throw ConfigError("kl_weight must be >= 0");
    if (kind == ReducerKind::VaeLstm) {
        if (lstm_steps * lstm_features != input_dim)
            throw ConfigError("lstm chunking " + std::to_string(lstm_steps) + "x" + std::to_string(lstm_features) +
                              " does not cover input dimension " + std::to_string(input_dim));
        if (lstm_hidden < 1) throw ConfigError("lstm_hidden must be >= 1");
        return;
    }
    if (hidden_dims.empty()) throw ConfigError("hidden_dims must not be empty");
    for (std::size_t i = 0; i < hidden_dims.size(); ++i) {
        if (hidden_dims[i] < 1) throw ConfigError("hidden_dims entries must be >= 1");
        if (i && hidden_dims[i] >= hidden_dims[i - 1]) throw ConfigError("hidden_dims must be strictly decreasing");
    }
}

const Tensor& ReducerModel::param(std::string_view name) const {
    for (const auto& p : params)
        if (p.name == name) return p.value;
    throw Error("model has no parameter '" + std::string(name) + "'");
}

std::vector<Tensor> ReducerModel::param_values() const {
    std::vector<Tensor> out;
    out.reserve(params.size());
    for (const auto& p : params) out.push_back(p.value);
    return out;
}

void ReducerModel::set_param_values(std::vector<Tensor> values) {
    if (values.size() != params.size()) throw ShapeMismatch("parameter count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i].same_shape(params[i].value)) throw ShapeMismatch("shape mismatch for parameter " + params[i].name);
        params[i].value = std::move(values[i]);
    }
}

Tensor table_matrix(const EmbeddingTable& table) { return Tensor(table.size(), table.dim, table.data); }

ReducerModel fit_reducer(const Tensor& data, const ReducerSpec& spec) {
    switch (spec.kind) {
        case ReducerKind::None: {
            spec.validate(data.cols());
            ReducerModel m;
            m.spec = spec;
            m.input_dim = data.cols();
            return m;
        }
        case ReducerKind::Pca: return fit_pca(data, spec);
        case ReducerKind::Autoencoder: return fit_autoencoder(data, spec);
        case ReducerKind::Vae: return fit_vae(data, spec);
        case ReducerKind::VaeLstm: return fit_vae_lstm(data, spec);
    }
    throw ConfigError("unknown reducer kind");
}

ReducerModel fit_reducer(const EmbeddingTable& table, const ReducerSpec& spec) {
    return fit_reducer(table_matrix(table), spec);
}

Tensor transform(const ReducerModel& model, const Tensor& vectors) {
    if (vectors.cols() != model.input_dim)
        throw ShapeMismatch("transform: vectors have " + std::to_string(vectors.cols()) + " columns, model expects " +
                            std::to_string(model.input_dim));
    switch (model.spec.kind) {
        case ReducerKind::None: return vectors;
        case ReducerKind::Pca: {
            const Tensor& mean = model.param("mean");
            const Tensor& comp = model.param("components");
            const std::size_t L = comp.rows(), D = comp.cols();
            Tensor out(vectors.rows(), L);
            std::vector<double> centered(D);
            for (std::size_t r = 0; r < vectors.rows(); ++r) {
                for (std::size_t c = 0; c < D; ++c) centered[c] = vectors(r, c) - mean[c];
                for (std::size_t k = 0; k < L; ++k) {
                    double s = 0.0;
                    for (std::size_t c = 0; c < D; ++c) s += centered[c] * comp(k, c);
                    out(r, k) = s;
                }
            }
            return out;
        }
        default: {
            constexpr std::size_t chunk = 1024;
            Tensor out(vectors.rows(), model.spec.latent_dim);
            for (std::size_t begin = 0; begin < vectors.rows(); begin += chunk) {
                const std::size_t end = std::min(vectors.rows(), begin + chunk);
                const auto first = vectors.data().begin() + static_cast<std::ptrdiff_t>(begin * vectors.cols());
                Tensor part(end - begin, vectors.cols(),
                            std::vector<double>(first, first + static_cast<std::ptrdiff_t>((end - begin) * vectors.cols())));
                Tensor enc = network_encode(model, part);
                std::copy(enc.data().begin(), enc.data().end(),
                          out.data().begin() + static_cast<std::ptrdiff_t>(begin * out.cols()));
            }
            return out;
        }
    }
}

// ---------------------------------------------------------------------------
// Model files
//
//   #reducer kind=<k> dim=<D> latent=<L> seed=<s>
//   spec key=value ...
//   param <name> <rows> <cols>
//   <rows lines of tab-separated values>
//   ...
//   end

std::string format_model(const ReducerModel& model) {
    const ReducerSpec& s = model.spec;
    std::ostringstream out;
    out << "#reducer kind=" << kind_name(s.kind) << " dim=" << model.input_dim << " latent=" << s.latent_dim
        << " seed=" << s.seed << "\n";
    out << "spec hidden_dims=";
    for (std::size_t i = 0; i < s.hidden_dims.size(); ++i) out << (i ? "," : "") << s.hidden_dims[i];
    out << " epochs=" << s.epochs << " batch_size=" << s.batch_size << " lr=" << io::format_full(s.lr)
        << " kl_weight=" << io::format_full(s.kl_weight) << " lstm_steps=" << s.lstm_steps
        << " lstm_features=" << s.lstm_features << " lstm_hidden=" << s.lstm_hidden
        << " degenerate=" << (model.degenerate ? 1 : 0) << "\n";
    for (const auto& p : model.params) {
        out << "param " << p.name << " " << p.value.rows() << " " << p.value.cols() << "\n";
        for (std::size_t r = 0; r < p.value.rows(); ++r) {
            for (std::size_t c = 0; c < p.value.cols(); ++c) out << (c ? "\t" : "") << io::format_full(p.value(r, c));
            out << "\n";
        }
    }
    out << "end\n";
    return out.str();
}

namespace {

std::vector<std::pair<std::string, std::string>> key_values(const std::string& line, std::size_t skip,
                                                           std::size_t line_no) {
    std::istringstream ss(line.substr(skip));
    std::vector<std::pair<std::string, std::string>> out;
    std::string kv;
    while (ss >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value, got '" + kv + "'", line_no);
        out.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return out;
}

long long int_field(const std::string& v, std::size_t line_no) {
    long long x;
    if (!io::parse_int(v, x) || x < 0) throw ParseError("bad integer '" + v + "'", line_no);
    return x;
}

double real_field(const std::string& v, std::size_t line_no) {
    double x;
    if (!io::parse_double(v, x) || !std::isfinite(x)) throw ParseError("bad number '" + v + "'", line_no);
    return x;
}

}  // namespace

ReducerModel parse_model(const std::string& text, std::optional<ReducerKind> expected) {
    const auto lines = io::split_lines(text);
    if (lines.empty() || lines[0].rfind("#reducer", 0) != 0) throw ParseError("missing #reducer header", 1);

    ReducerModel m;
    bool have_kind = false;
    for (const auto& [k, v] : key_values(lines[0], 8, 1)) {
        if (k == "kind") {
            try {
                m.spec.kind = parse_kind(v);
            } catch (const ConfigError&) {
                throw ParseError("unknown reducer kind '" + v + "'", 1);
            }
            have_kind = true;
        } else if (k == "dim") {
            m.input_dim = static_cast<std::size_t>(int_field(v, 1));
        } else if (k == "latent") {
            m.spec.latent_dim = static_cast<std::size_t>(int_field(v, 1));
        } else if (k == "seed") {
            std::uint64_t seed = 0;
            for (char c : v) {
                if (c < '0' || c > '9') throw ParseError("bad seed '" + v + "'", 1);
                seed = seed * 10 + static_cast<std::uint64_t>(c - '0');
            }
            m.spec.seed = seed;
        }
    }
    if (!have_kind) throw ParseError("header has no kind", 1);
    if (expected && *expected != m.spec.kind)
        throw KindMismatch("model file holds kind '" + std::string(kind_name(m.spec.kind)) + "', expected '" +
                           std::string(kind_name(*expected)) + "'");

    std::size_t li = 1;
    bool ended = false;
    while (li < lines.size()) {
        const std::string& line = lines[li];
        const std::size_t line_no = li + 1;
        if (line.rfind("spec", 0) == 0) {
            for (const auto& [k, v] : key_values(line, 4, line_no)) {
                if (k == "hidden_dims") {
                    m.spec.hidden_dims.clear();
                    std::istringstream hs(v);
                    std::string part;
                    while (std::getline(hs, part, ','))
                        if (!part.empty()) m.spec.hidden_dims.push_back(static_cast<std::size_t>(int_field(part, line_no)));
                } else if (k == "epochs") m.spec.epochs = static_cast<int>(int_field(v, line_no));
                else if (k == "batch_size") m.spec.batch_size = static_cast<std::size_t>(int_field(v, line_no));
                else if (k == "lr") m.spec.lr = real_field(v, line_no);
                else if (k == "kl_weight") m.spec.kl_weight = real_field(v, line_no);
                else if (k == "lstm_steps") m.spec.lstm_steps = static_cast<std::size_t>(int_field(v, line_no));
                else if (k == "lstm_features") m.spec.lstm_features = static_cast<std::size_t>(int_field(v, line_no));
                else if (k == "lstm_hidden") m.spec.lstm_hidden = static_cast<std::size_t>(int_field(v, line_no));
                else if (k == "degenerate") m.degenerate = int_field(v, line_no) != 0;
            }
            ++li;
        } else if (line.rfind("param ", 0) == 0) {
            std::istringstream ps(line.substr(6));
            std::string name, rows_s, cols_s;
            if (!(ps >> name >> rows_s >> cols_s)) throw ParseError("expected 'param <name> <rows> <cols>'", line_no);
            const auto rows = static_cast<std::size_t>(int_field(rows_s, line_no));
            const auto cols = static_cast<std::size_t>(int_field(cols_s, line_no));
            Tensor t(rows, cols);
            for (std::size_t r = 0; r < rows; ++r) {
                const std::size_t row_li = li + 1 + r;
                if (row_li >= lines.size()) throw ParseError("truncated parameter block '" + name + "'", row_li + 1);
                std::istringstream rs(lines[row_li]);
                std::string field;
                std::size_t c = 0;
                while (std::getline(rs, field, '\t')) {
                    if (c >= cols) throw ParseError("too many values in parameter row", row_li + 1);
                    t(r, c++) = real_field(field, row_li + 1);
                }
                if (c != cols) throw ParseError("too few values in parameter row", row_li + 1);
            }
            m.params.push_back({name, std::move(t)});
            li += 1 + rows;
        } else if (line == "end") {
            ended = true;
            break;
        } else if (io::trim(line).empty()) {
            ++li;
        } else {
            throw ParseError("unexpected line '" + line + "'", line_no);
        }
    }
    if (!ended) throw ParseError("model file is truncated (no 'end' marker)", lines.size());

    // Structural check against the architecture the spec implies.
    if (m.spec.kind == ReducerKind::Pca) {
        if (m.params.size() < 2 || m.param("components").cols() != m.input_dim ||
            m.param("components").rows() != m.spec.latent_dim || m.param("mean").cols() != m.input_dim)
            throw ParseError("pca parameters do not match header dimensions");
    } else if (m.spec.kind != ReducerKind::None) {
        const ReducerModel ref = init_network(m.spec, m.input_dim);
        if (ref.params.size() != m.params.size()) throw ParseError("network has the wrong number of parameters");
        for (std::size_t i = 0; i < ref.params.size(); ++i)
            if (ref.params[i].name != m.params[i].name || !ref.params[i].value.same_shape(m.params[i].value))
                throw ParseError("parameter '" + m.params[i].name + "' does not match the architecture");
    }
    return m;
}

void save_model(const ReducerModel& model, const std::filesystem::path& path) {
    io::write_atomic(path, format_model(model));
}

ReducerModel load_model(const std::filesystem::path& path, std::optional<ReducerKind> expected) {
    return parse_model(io::read_file(path), expected);
}

std::string format_trace(const std::vector<TraceRow>& trace) {
    std::string out = "epoch,loss,recon,kl\n";
    for (const auto& r : trace)
        out += std::to_string(r.epoch) + "," + io::format_full(r.loss) + "," + io::format_full(r.recon) + "," +
               io::format_full(r.kl) + "\n";
    return out;
}

}  // namespace geoglove
