#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace geoglove {

struct Document {
    std::string id;
    std::string text;
};

struct TokenStream {
    std::string doc_id;
    std::vector<std::string> tokens;

    bool operator==(const TokenStream&) const = default;
};

class StopWordList {
public:
    StopWordList() = default;
    explicit StopWordList(const std::vector<std::string>& words);

    /// One word per line, `#` comments allowed. Words are lowercased.
    static StopWordList load(const std::filesystem::path& path);

    bool contains(std::string_view w) const { return words_.contains(std::string(w)); }
    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }

private:
    std::unordered_set<std::string> words_;
};

/// Lowercases, folds single-codepoint Latin diacritics to ASCII and splits on
/// every other character. Tokens shorter than two letters are dropped.
/// Invalid UTF-8 bytes act as split points.
std::vector<std::string> tokenize(std::string_view text);

std::vector<std::string> remove_stop_words(const std::vector<std::string>& tokens,
                                           const StopWordList& stops);

/// Porter (1980) suffix stripping, original algorithm without later extensions.
std::string porter_stem(std::string_view word);

/// tokenize -> remove_stop_words -> stem, per document, in input order.
/// Throws DuplicateDocumentId.
std::vector<TokenStream> process_corpus(const std::vector<Document>& docs, const StopWordList& stops);

/// Corpus input: a directory of `.txt` files (id = path relative to the
/// directory, sorted) or a single file of `id<TAB>text` lines.
std::vector<Document> load_corpus(const std::filesystem::path& path);

/// Every input file a corpus at `path` reads, for staleness checks.
std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& path);

}  // namespace geoglove
