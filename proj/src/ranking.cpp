#include "geoglove/ranking.hpp"

#include <algorithm>
#include <cmath>

#include "geoglove/error.hpp"
#include "geoglove/io.hpp"

namespace geoglove {

using nn::Tensor;

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        throw DimensionMismatch("cosine_similarity: lengths " + std::to_string(u.size()) + " and " +
                                std::to_string(v.size()));
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    nu = std::sqrt(nu);
    nv = std::sqrt(nv);
    if (nu < 1e-12 || nv < 1e-12) throw ZeroVector("cosine_similarity: zero-norm vector");
    return std::clamp(dot / (nu * nv), -1.0, 1.0);
}

ScoreResult score_all(const std::string& keyword, const EmbeddingTable& table, const ReducerModel& model,
                      const FilteredVocabulary& fvocab) {
    const auto kw = table.vocabulary.index(keyword);
    if (!kw) throw UnknownKeyword(keyword);

    std::vector<std::size_t> rows{*kw};
    std::vector<const std::string*> words;
    for (const auto& w : fvocab.words) {
        if (w == keyword) continue;
        if (auto idx = table.vocabulary.index(w)) {
            rows.push_back(*idx);
            words.push_back(&w);
        }
    }
    Tensor raw(rows.size(), table.dim);
    for (std::size_t r = 0; r < rows.size(); ++r)
        std::copy_n(table.row(rows[r]), table.dim, raw.data().begin() + static_cast<std::ptrdiff_t>(r * table.dim));
    const Tensor reduced = transform(model, raw);
    const std::size_t d = reduced.cols();
    const std::span<const double> all = reduced.data();

    ScoreResult res;
    const auto key_vec = all.subspan(0, d);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        try {
            res.scores.push_back({*words[r - 1], cosine_similarity(key_vec, all.subspan(r * d, d))});
        } catch (const ZeroVector&) {
            // A zero keyword vector makes every score undefined.
            double norm = 0.0;
            for (double x : key_vec) norm += x * x;
            if (std::sqrt(norm) < 1e-12) throw ZeroVector("keyword '" + keyword + "' maps to a zero vector");
            ++res.skipped_zero;
        }
    }
    return res;
}

TopCities top_k_cities(const std::vector<SimilarityScore>& scores, const FilteredVocabulary& fvocab, std::size_t k) {
    std::vector<RankedCity> rows;
    for (const auto& s : scores)
        for (const auto& c : fvocab.cities_of(s.word)) rows.push_back({0, s.word, c, s.score});
    std::sort(rows.begin(), rows.end(), [](const RankedCity& a, const RankedCity& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.word != b.word) return a.word < b.word;
        return a.city.file_order < b.city.file_order;
    });
    TopCities out;
    out.short_list = rows.size() < k;
    if (rows.size() > k) rows.resize(k);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = i + 1;
    out.rows = std::move(rows);
    return out;
}

std::string format_ranking_csv(const std::vector<RankedCity>& rows) {
    std::string out = "rank,word,city,admin_name,country,lat,lng,score\n";
    for (const auto& r : rows) {
        out += std::to_string(r.rank) + "," + io::csv_field(r.word) + "," + io::csv_field(r.city.city) + "," +
               io::csv_field(r.city.admin_name) + "," + io::csv_field(r.city.country) + "," +
               io::format_shortest(r.city.lat) + "," + io::format_shortest(r.city.lng) + "," +
               io::format_fixed(r.score, 6) + "\n";
    }
    return out;
}

std::vector<RankedCity> parse_ranking_csv(const std::string& text) {
    const auto lines = io::split_lines(text);
    if (lines.empty() || io::trim(lines[0]) != "rank,word,city,admin_name,country,lat,lng,score")
        throw ParseError("ranking file has an unexpected header", 1);
    std::vector<RankedCity> rows;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (io::trim(lines[li]).empty()) continue;
        const auto f = io::parse_csv_row(lines[li], li + 1);
        if (f.size() != 8) throw ParseError("expected 8 fields", li + 1);
        RankedCity r;
        long long rank;
        if (!io::parse_int(f[0], rank) || rank < 1) throw ParseError("bad rank", li + 1);
        r.rank = static_cast<std::size_t>(rank);
        r.word = f[1];
        r.city.city = f[2];
        r.city.city_ascii = f[1];
        r.city.admin_name = f[3];
        r.city.country = f[4];
        if (!io::parse_double(f[5], r.city.lat) || !io::parse_double(f[6], r.city.lng) ||
            !io::parse_double(f[7], r.score))
            throw ParseError("bad number", li + 1);
        if (std::abs(r.city.lat) > 90.0 || std::abs(r.city.lng) > 180.0) throw RangeError("coordinate out of range", li + 1);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string format_ranking_table(const std::vector<RankedCity>& rows) {
    std::size_t wc = 4, ac = 10;
    for (const auto& r : rows) {
        wc = std::max(wc, r.word.size());
        ac = std::max(ac, r.city.admin_name.size());
    }
    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); };
    std::string out = "Rank | " + pad("City", wc) + " | Admin-name\n";
    out += "-----+-" + std::string(wc, '-') + "-+-" + std::string(ac, '-') + "\n";
    for (const auto& r : rows) out += pad(std::to_string(r.rank), 4) + " | " + pad(r.word, wc) + " | " + r.city.admin_name + "\n";
    return out;
}

namespace {
std::size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j)
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
        std::swap(prev, cur);
    }
    return prev[b.size()];
}
}  // namespace

std::vector<std::string> suggest_words(const std::string& word, const Vocabulary& vocab, std::size_t n) {
    std::vector<std::pair<std::size_t, std::string>> cand;
    for (const auto& w : vocab.words()) cand.emplace_back(edit_distance(word, w), w);
    std::sort(cand.begin(), cand.end());
    std::vector<std::string> out;
    for (std::size_t i = 0; i < cand.size() && i < n; ++i) out.push_back(cand[i].second);
    return out;
}

}  // namespace geoglove
