#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geoglove/corpus.hpp"

namespace geoglove {

class Vocabulary {
public:
    Vocabulary() = default;
    /// Words must be unique; counts parallel to words.
    Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> counts);

    std::size_t size() const noexcept { return words_.size(); }
    const std::string& word(std::size_t i) const { return words_.at(i); }
    std::uint64_t count(std::size_t i) const { return counts_.at(i); }
    const std::vector<std::string>& words() const noexcept { return words_; }
    std::optional<std::size_t> index(const std::string& w) const;

    bool operator==(const Vocabulary& o) const { return words_ == o.words_ && counts_ == o.counts_; }

private:
    std::vector<std::string> words_;
    std::vector<std::uint64_t> counts_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Words with frequency >= min_count, by descending frequency then
/// lexicographically. Throws EmptyVocabulary.
Vocabulary build_vocabulary(const std::vector<TokenStream>& streams, std::uint64_t min_count);

struct CoocEntry {
    std::uint32_t row;
    std::uint32_t col;
    double value;
};

/// Sparse symmetric co-occurrence counts. `entries()` is sorted by (row, col).
class CoocMatrix {
public:
    explicit CoocMatrix(std::size_t vocab_size = 0) : vocab_size_(vocab_size) {}

    /// Adds `w` to both (i, j) and (j, i); a diagonal pair gets 2w at (i, i).
    void add_symmetric(std::uint32_t i, std::uint32_t j, double w);
    /// Sums another matrix into this one.
    void merge(const CoocMatrix& other);

    double at(std::uint32_t i, std::uint32_t j) const;
    std::size_t nnz() const noexcept { return cells_.size(); }
    bool empty() const noexcept { return cells_.empty(); }
    std::size_t vocab_size() const noexcept { return vocab_size_; }
    double total() const;
    std::vector<CoocEntry> entries() const;

private:
    std::size_t vocab_size_;
    std::unordered_map<std::uint64_t, double> cells_;  // key = row << 32 | col
};

/// Each in-window pair at distance d within a document adds 1/d to both
/// (t, u) and (u, t). Out-of-vocabulary tokens still occupy positions.
CoocMatrix accumulate_cooc(const std::vector<TokenStream>& streams, const Vocabulary& vocab, int window);

/// GloVe weighting f(x) = (x/x_max)^alpha, capped at 1.
double glove_weight(double x, double x_max, double alpha);

struct GloveConfig {
    int dim = 200;
    int window = 10;
    double x_max = 100.0;
    double alpha = 0.75;
    double lr = 0.05;
    int epochs = 25;
    std::uint64_t seed = 1;
    std::uint64_t min_count = 5;

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

struct EmbeddingTable {
    Vocabulary vocabulary;
    std::size_t dim = 0;
    std::vector<double> data;  // row-major V x dim

    std::size_t size() const noexcept { return vocabulary.size(); }
    const double* row(std::size_t i) const { return data.data() + i * dim; }
    double* row(std::size_t i) { return data.data() + i * dim; }

    /// Compares words, dimension and values; corpus counts are not persisted.
    bool operator==(const EmbeddingTable& o) const {
        return vocabulary.words() == o.vocabulary.words() && dim == o.dim && data == o.data;
    }
};

/// Parameters of one GloVe model; exposed so the per-entry loss and its
/// gradient can be tested directly.
struct GloveParams {
    std::size_t vocab = 0;
    std::size_t dim = 0;
    std::vector<double> w, ctx;         // V x dim
    std::vector<double> b, ctx_b;       // V

    /// Uniform in [-0.5/dim, 0.5/dim].
    static GloveParams init(std::size_t vocab, std::size_t dim, std::uint64_t seed);
};

struct GloveEntryGrad {
    std::vector<double> w_i, ctx_j;
    double b_i = 0.0, ctx_b_j = 0.0;
};

/// Loss of one co-occurrence entry, 0.5 f(x) (w_i.w~_j + b_i + b~_j - log x)^2.
double glove_entry_loss(const GloveParams& p, const CoocEntry& e, double x_max, double alpha);
/// Analytic gradient of `glove_entry_loss`.
GloveEntryGrad glove_entry_grad(const GloveParams& p, const CoocEntry& e, double x_max, double alpha);

struct GloveResult {
    EmbeddingTable table;
    std::vector<double> loss_trace;  // mean entry loss per epoch
};

/// AdaGrad over seeded shuffles of the nonzero entries. Final vectors are
/// w + w~. Throws NonFiniteLoss.
GloveResult train_glove(const CoocMatrix& cooc, const Vocabulary& vocab, const GloveConfig& config);

/// Text format: header `#glove dim=D vocab=V`, then `word<TAB>v1<TAB>...<TAB>vD`
/// with 17 significant digits.
std::string format_embeddings(const EmbeddingTable& table);
EmbeddingTable parse_embeddings(const std::string& text);
void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path);
EmbeddingTable load_embeddings(const std::filesystem::path& path);

std::string format_loss_trace(const std::vector<double>& trace);

}  // namespace geoglove
