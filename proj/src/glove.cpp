#include "geoglove/glove.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geoglove/error.hpp"
#include "geoglove/io.hpp"
#include "geoglove/rng.hpp"

namespace geoglove {

namespace {
constexpr std::uint64_t key_of(std::uint32_t i, std::uint32_t j) {
    return (static_cast<std::uint64_t>(i) << 32) | j;
}
}  // namespace

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> counts)
    : words_(std::move(words)), counts_(std::move(counts)) {
    if (counts_.size() != words_.size()) throw DimensionMismatch("vocabulary words/counts length differ");
    index_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (!index_.emplace(words_[i], i).second) throw ParseError("duplicate vocabulary word '" + words_[i] + "'");
}

std::optional<std::size_t> Vocabulary::index(const std::string& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vocabulary build_vocabulary(const std::vector<TokenStream>& streams, std::uint64_t min_count) {
    std::unordered_map<std::string, std::uint64_t> freq;
    for (const auto& s : streams)
        for (const auto& t : s.tokens) ++freq[t];

    std::vector<std::pair<std::string, std::uint64_t>> kept;
    for (auto& [w, c] : freq)
        if (c >= min_count) kept.emplace_back(w, c);
    if (kept.empty()) throw EmptyVocabulary("no word reaches min_count " + std::to_string(min_count));

    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    std::vector<std::string> words;
    std::vector<std::uint64_t> counts;
    for (auto& [w, c] : kept) {
        words.push_back(std::move(w));
        counts.push_back(c);
    }
    return Vocabulary(std::move(words), std::move(counts));
}

// ---------------------------------------------------------------------------
// Co-occurrence

void CoocMatrix::add_symmetric(std::uint32_t i, std::uint32_t j, double w) {
    cells_[key_of(i, j)] += w;
    cells_[key_of(j, i)] += w;
}

void CoocMatrix::merge(const CoocMatrix& other) {
    vocab_size_ = std::max(vocab_size_, other.vocab_size_);
    for (const auto& [k, v] : other.cells_) cells_[k] += v;
}

double CoocMatrix::at(std::uint32_t i, std::uint32_t j) const {
    auto it = cells_.find(key_of(i, j));
    return it == cells_.end() ? 0.0 : it->second;
}

std::vector<CoocEntry> CoocMatrix::entries() const {
    std::vector<CoocEntry> out;
    out.reserve(cells_.size());
    for (const auto& [k, v] : cells_)
        out.push_back({static_cast<std::uint32_t>(k >> 32), static_cast<std::uint32_t>(k & 0xffffffffu), v});
    std::sort(out.begin(), out.end(),
              [](const CoocEntry& a, const CoocEntry& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    return out;
}

double CoocMatrix::total() const {
    double s = 0.0;
    for (const auto& e : entries()) s += e.value;
    return s;
}

CoocMatrix accumulate_cooc(const std::vector<TokenStream>& streams, const Vocabulary& vocab, int window) {
    if (window < 1) throw ConfigError("window must be >= 1");
    CoocMatrix m(vocab.size());
    std::vector<long> ids;
    for (const auto& s : streams) {
        ids.clear();
        for (const auto& t : s.tokens) {
            auto idx = vocab.index(t);
            ids.push_back(idx ? static_cast<long>(*idx) : -1);
        }
        for (std::size_t p = 0; p < ids.size(); ++p) {
            if (ids[p] < 0) continue;
            const std::size_t end = std::min(ids.size(), p + static_cast<std::size_t>(window) + 1);
            for (std::size_t q = p + 1; q < end; ++q) {
                if (ids[q] < 0) continue;
                m.add_symmetric(static_cast<std::uint32_t>(ids[p]), static_cast<std::uint32_t>(ids[q]),
                                1.0 / static_cast<double>(q - p));
            }
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Training

double glove_weight(double x, double x_max, double alpha) {
    return x < x_max ? std::pow(x / x_max, alpha) : 1.0;
}

void GloveConfig::validate() const {
    if (dim < 2) throw ConfigError("glove dim must be >= 2");
    if (window < 1) throw ConfigError("glove window must be >= 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("glove alpha must be in (0, 1]");
    if (!(x_max > 0.0)) throw ConfigError("glove x_max must be > 0");
    if (!(lr > 0.0)) throw ConfigError("glove lr must be > 0");
    if (epochs < 0) throw ConfigError("glove epochs must be >= 0");
}

GloveParams GloveParams::init(std::size_t vocab, std::size_t dim, std::uint64_t seed) {
    GloveParams p;
    p.vocab = vocab;
    p.dim = dim;
    Rng rng(seed);
    const double scale = 0.5 / static_cast<double>(dim);
    auto fill = [&](std::vector<double>& v, std::size_t n) {
        v.resize(n);
        for (auto& x : v) x = rng.uniform(-scale, scale);
    };
    fill(p.w, vocab * dim);
    fill(p.ctx, vocab * dim);
    fill(p.b, vocab);
    fill(p.ctx_b, vocab);
    return p;
}

namespace {
double residual(const GloveParams& p, const CoocEntry& e) {
    const double* wi = p.w.data() + e.row * p.dim;
    const double* cj = p.ctx.data() + e.col * p.dim;
    double dot = 0.0;
    for (std::size_t k = 0; k < p.dim; ++k) dot += wi[k] * cj[k];
    return dot + p.b[e.row] + p.ctx_b[e.col] - std::log(e.value);
}
}  // namespace

double glove_entry_loss(const GloveParams& p, const CoocEntry& e, double x_max, double alpha) {
    const double diff = residual(p, e);
    return 0.5 * glove_weight(e.value, x_max, alpha) * diff * diff;
}

GloveEntryGrad glove_entry_grad(const GloveParams& p, const CoocEntry& e, double x_max, double alpha) {
    const double fdiff = glove_weight(e.value, x_max, alpha) * residual(p, e);
    GloveEntryGrad g;
    g.w_i.resize(p.dim);
    g.ctx_j.resize(p.dim);
    for (std::size_t k = 0; k < p.dim; ++k) {
        g.w_i[k] = fdiff * p.ctx[e.col * p.dim + k];
        g.ctx_j[k] = fdiff * p.w[e.row * p.dim + k];
    }
    g.b_i = fdiff;
    g.ctx_b_j = fdiff;
    return g;
}

GloveResult train_glove(const CoocMatrix& cooc, const Vocabulary& vocab, const GloveConfig& config) {
    config.validate();
    if (cooc.empty()) throw EmptyVocabulary("co-occurrence matrix is empty");
    const std::size_t V = vocab.size();
    const std::size_t D = static_cast<std::size_t>(config.dim);

    GloveParams p = GloveParams::init(V, D, config.seed);
    // AdaGrad accumulators start at 1, as in the reference implementation.
    std::vector<double> gsq_w(V * D, 1.0), gsq_c(V * D, 1.0), gsq_b(V, 1.0), gsq_cb(V, 1.0);

    std::vector<CoocEntry> entries = cooc.entries();
    for (const auto& e : entries)
        if (e.row >= V || e.col >= V) throw DimensionMismatch("co-occurrence index outside vocabulary");

    Rng shuffler(derive_seed(config.seed, "glove.shuffle"));
    GloveResult result;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        shuffler.shuffle(entries);
        double cost = 0.0;
        for (const auto& e : entries) {
            double* wi = p.w.data() + e.row * D;
            double* cj = p.ctx.data() + e.col * D;
            double* gwi = gsq_w.data() + e.row * D;
            double* gcj = gsq_c.data() + e.col * D;

            const double diff = residual(p, e);
            double fdiff = glove_weight(e.value, config.x_max, config.alpha) * diff;
            cost += 0.5 * fdiff * diff;
            fdiff *= config.lr;
            for (std::size_t k = 0; k < D; ++k) {
                const double t1 = fdiff * cj[k];
                const double t2 = fdiff * wi[k];
                wi[k] -= t1 / std::sqrt(gwi[k]);
                cj[k] -= t2 / std::sqrt(gcj[k]);
                gwi[k] += t1 * t1;
                gcj[k] += t2 * t2;
            }
            p.b[e.row] -= fdiff / std::sqrt(gsq_b[e.row]);
            p.ctx_b[e.col] -= fdiff / std::sqrt(gsq_cb[e.col]);
            gsq_b[e.row] += fdiff * fdiff;
            gsq_cb[e.col] += fdiff * fdiff;
        }
        const double mean = cost / static_cast<double>(entries.size());
        if (!std::isfinite(mean))
            throw NonFiniteLoss("glove loss became non-finite in epoch " + std::to_string(epoch + 1), epoch + 1);
        result.loss_trace.push_back(mean);
    }

    EmbeddingTable& t = result.table;
    t.vocabulary = vocab;
    t.dim = D;
    t.data.resize(V * D);
    for (std::size_t i = 0; i < V * D; ++i) t.data[i] = p.w[i] + p.ctx[i];
    for (double x : t.data)
        if (!std::isfinite(x)) throw NonFiniteLoss("non-finite embedding after training", config.epochs);
    return result;
}

// ---------------------------------------------------------------------------
// Embedding file

std::string format_embeddings(const EmbeddingTable& table) {
    std::string out = "#glove dim=" + std::to_string(table.dim) + " vocab=" + std::to_string(table.size()) + "\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
        out += table.vocabulary.word(i);
        const double* r = table.row(i);
        for (std::size_t k = 0; k < table.dim; ++k) {
            out += '\t';
            out += io::format_full(r[k]);
        }
        out += '\n';
    }
    return out;
}

EmbeddingTable parse_embeddings(const std::string& text) {
    const auto lines = io::split_lines(text);
    std::size_t first = 0;
    while (first < lines.size() && io::trim(lines[first]).empty()) ++first;
    if (first == lines.size()) throw EmptyVocabulary("embedding file is empty");

    long long header_dim = -1, header_vocab = -1;
    if (lines[first].rfind("#glove", 0) == 0) {
        std::istringstream hs(lines[first].substr(6));
        std::string kv;
        while (hs >> kv) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ParseError("bad header field '" + kv + "'", first + 1);
            long long v;
            if (!io::parse_int(std::string_view(kv).substr(eq + 1), v)) throw ParseError("bad header value", first + 1);
            if (kv.compare(0, eq, "dim") == 0) header_dim = v;
            else if (kv.compare(0, eq, "vocab") == 0) header_vocab = v;
        }
        ++first;
    }

    EmbeddingTable t;
    std::vector<std::string> words;
    std::vector<std::uint64_t> counts;
    long long dim = header_dim;
    for (std::size_t li = first; li < lines.size(); ++li) {
        const std::string& line = lines[li];
        if (io::trim(line).empty()) continue;
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        for (;;) {
            const auto tab = line.find('\t', start);
            fields.emplace_back(std::string_view(line).substr(start, tab == std::string::npos ? std::string::npos : tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (fields.size() < 2 || fields[0].empty()) throw ParseError("expected word<TAB>values", li + 1);
        const long long arity = static_cast<long long>(fields.size()) - 1;
        if (dim < 0) dim = arity;
        if (arity != dim)
            throw ParseError("row has " + std::to_string(arity) + " values, expected " + std::to_string(dim), li + 1);
        words.emplace_back(fields[0]);
        counts.push_back(0);
        for (std::size_t k = 1; k < fields.size(); ++k) {
            double v;
            if (!io::parse_double(fields[k], v) || !std::isfinite(v))
                throw ParseError("bad number '" + std::string(fields[k]) + "'", li + 1);
            t.data.push_back(v);
        }
    }
    if (words.empty()) throw EmptyVocabulary("embedding file has no rows");
    if (header_vocab >= 0 && static_cast<std::size_t>(header_vocab) != words.size())
        throw DimensionMismatch("header declares vocab=" + std::to_string(header_vocab) + " but file has " +
                                std::to_string(words.size()) + " rows");
    t.dim = static_cast<std::size_t>(dim);
    t.vocabulary = Vocabulary(std::move(words), std::move(counts));
    return t;
}

void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path) {
    io::write_atomic(path, format_embeddings(table));
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) { return parse_embeddings(io::read_file(path)); }

std::string format_loss_trace(const std::vector<double>& trace) {
    std::string out = "epoch,mean_loss\n";
    for (std::size_t i = 0; i < trace.size(); ++i) out += std::to_string(i + 1) + "," + io::format_full(trace[i]) + "\n";
    return out;
}

}  // namespace geoglove
