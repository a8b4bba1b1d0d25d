#include "geoglove/corpus.hpp"

#include <algorithm>
#include <string_view>
#include <unordered_set>

#include "geoglove/error.hpp"
#include "geoglove/io.hpp"

namespace geoglove {

namespace fs = std::filesystem;

namespace {

// ASCII fold for U+00C0..U+017F; '.' marks code points with no single-letter
// equivalent (ligatures, thorn, sharp s, math signs), which become split points.
constexpr std::string_view kLatinFold =
    "aaaaaa.ceeeeiiii"  // U+00C0
    "dnooooo.ouuuuy.."  // U+00D0
    "aaaaaa.ceeeeiiii"  // U+00E0
    "dnooooo.ouuuuy.y"  // U+00F0
    "aaaaaaccccccccdddd"
    "eeeeeeeeeegggggggghhhhiiiiiiiiii"
    "..jjkkkllllllllllnnnnnnnnnoooooo..rrrrrrsssssssstttttt"
    "uuuuuuuuuuuuwwyyyzzzzzzs";
static_assert(kLatinFold.size() == 0x180 - 0xC0);

// Decodes one UTF-8 sequence at `i`, advancing it. Returns -1 on malformed input
// (consuming a single byte).
long decode_utf8(std::string_view s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int len;
    long cp;
    if (b0 < 0x80) {
        ++i;
        return b0;
    } else if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return -1;
    }
    if (i + len > s.size()) {
        ++i;
        return -1;
    }
    for (int k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return -1;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    i += len;
    return cp;
}

char fold_codepoint(long cp) {
    if (cp >= 'A' && cp <= 'Z') return static_cast<char>(cp - 'A' + 'a');
    if (cp >= 'a' && cp <= 'z') return static_cast<char>(cp);
    if (cp >= 0xC0 && cp < 0x180) {
        char c = kLatinFold[static_cast<std::size_t>(cp - 0xC0)];
        return c == '.' ? 0 : c;
    }
    return 0;
}

}  // namespace

StopWordList::StopWordList(const std::vector<std::string>& words) {
    for (auto w : words) {
        std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
        words_.insert(std::move(w));
    }
}

StopWordList StopWordList::load(const fs::path& path) { return StopWordList(io::read_word_list(path)); }

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (cur.size() >= 2) tokens.push_back(cur);
        cur.clear();
    };
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = fold_codepoint(decode_utf8(text, i));
        if (c)
            cur += c;
        else
            flush();
    }
    flush();
    return tokens;
}

std::vector<std::string> remove_stop_words(const std::vector<std::string>& tokens,
                                           const StopWordList& stops) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens)
        if (!stops.contains(t)) out.push_back(t);
    return out;
}

std::vector<TokenStream> process_corpus(const std::vector<Document>& docs, const StopWordList& stops) {
    std::unordered_set<std::string> seen;
    for (const auto& d : docs)
        if (!seen.insert(d.id).second) throw DuplicateDocumentId("duplicate document id '" + d.id + "'");

    std::vector<TokenStream> streams;
    streams.reserve(docs.size());
    for (const auto& d : docs) {
        TokenStream ts{d.id, remove_stop_words(tokenize(d.text), stops)};
        for (auto& t : ts.tokens) t = porter_stem(t);
        streams.push_back(std::move(ts));
    }
    return streams;
}

std::vector<fs::path> corpus_files(const fs::path& path) {
    if (!fs::is_directory(path)) return {path};
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(path))
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<Document> load_corpus(const fs::path& path) {
    if (!fs::exists(path)) throw Error("corpus path does not exist: " + path.string());
    std::vector<Document> docs;
    if (fs::is_directory(path)) {
        for (const auto& file : corpus_files(path))
            docs.push_back({fs::relative(file, path).generic_string(), io::read_file(file)});
        return docs;
    }
    std::size_t line_no = 0;
    for (const auto& line : io::split_lines(io::read_file(path))) {
        ++line_no;
        if (io::trim(line).empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("expected id<TAB>text", line_no);
        docs.push_back({line.substr(0, tab), line.substr(tab + 1)});
    }
    return docs;
}

}  // namespace geoglove
