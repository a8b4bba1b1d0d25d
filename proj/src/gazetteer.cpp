#include "geoglove/gazetteer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <optional>

#include "geoglove/error.hpp"
#include "geoglove/io.hpp"

namespace geoglove {

namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (file line, fields)
};

std::string normalize_header(std::string h) {
    h = std::string(io::trim(h));
    std::transform(h.begin(), h.end(), h.begin(), [](unsigned char c) { return c == '-' ? '_' : std::tolower(c); });
    return h;
}

Table read_csv(const std::string& text) {
    Table t;
    auto lines = io::split_lines(text);
    std::size_t li = 0;
    // Skip a UTF-8 BOM and leading blank lines.
    if (!lines.empty() && lines[0].rfind("\xEF\xBB\xBF", 0) == 0) lines[0].erase(0, 3);
    while (li < lines.size() && io::trim(lines[li]).empty()) ++li;
    if (li == lines.size()) return t;
    for (auto& h : io::parse_csv_row(lines[li], li + 1)) t.header.push_back(normalize_header(h));
    for (++li; li < lines.size(); ++li) {
        if (io::trim(lines[li]).empty()) continue;
        auto fields = io::parse_csv_row(lines[li], li + 1);
        if (fields.size() != t.header.size())
            throw ParseError("row has " + std::to_string(fields.size()) + " fields, header has " +
                                 std::to_string(t.header.size()),
                             li + 1);
        t.rows.emplace_back(li + 1, std::move(fields));
    }
    return t;
}

std::size_t column(const Table& t, const std::string& name) {
    auto it = std::find(t.header.begin(), t.header.end(), name);
    if (it == t.header.end()) throw ParseError("missing column '" + name + "'", 1);
    return static_cast<std::size_t>(it - t.header.begin());
}

double coordinate(const std::string& field, double limit, const char* what, std::size_t line) {
    double v;
    if (!io::parse_double(field, v) || !std::isfinite(v))
        throw ParseError(std::string("bad ") + what + " '" + field + "'", line);
    if (v < -limit || v > limit) throw RangeError(std::string(what) + " " + field + " out of range", line);
    return v;
}

}  // namespace

std::string normalize_city_key(std::string_view name) {
    std::string out;
    bool pending_space = false;
    for (unsigned char c : name) {
        if (std::isalpha(c)) {
            if (pending_space && !out.empty()) out += ' ';
            pending_space = false;
            out += static_cast<char>(std::tolower(c));
        } else {
            pending_space = true;
        }
    }
    return out;
}

std::vector<CityRecord> parse_cities(const std::string& text) {
    const Table t = read_csv(text);
    if (t.header.empty()) throw ParseError("cities file is empty", 1);
    const std::array<std::size_t, 8> col{column(t, "city"),    column(t, "city_ascii"), column(t, "lat"),
                                         column(t, "lng"),     column(t, "country"),    column(t, "iso2"),
                                         column(t, "iso3"),    column(t, "admin_name")};
    std::vector<CityRecord> out;
    out.reserve(t.rows.size());
    for (const auto& [line, f] : t.rows) {
        CityRecord c;
        c.city = f[col[0]];
        c.city_ascii = normalize_city_key(f[col[1]]);
        if (c.city_ascii.empty()) throw ParseError("city_ascii has no letters", line);
        c.lat = coordinate(f[col[2]], 90.0, "lat", line);
        c.lng = coordinate(f[col[3]], 180.0, "lng", line);
        c.country = f[col[4]];
        c.iso2 = f[col[5]];
        c.iso3 = f[col[6]];
        c.admin_name = f[col[7]];
        c.file_order = out.size();
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<CityRecord> load_cities(const std::filesystem::path& path) { return parse_cities(io::read_file(path)); }

std::vector<MineRecord> parse_mines(const std::string& text) {
    const Table t = read_csv(text);
    if (t.header.empty()) throw EmptyMineSet("mines file is empty");
    const std::size_t cn = column(t, "name"), clat = column(t, "lat"), clng = column(t, "lng"),
                      cc = column(t, "commodity");
    std::vector<MineRecord> out;
    for (const auto& [line, f] : t.rows)
        out.push_back({f[cn], coordinate(f[clat], 90.0, "lat", line), coordinate(f[clng], 180.0, "lng", line), f[cc]});
    if (out.empty()) throw EmptyMineSet("mines file has no rows");
    return out;
}

std::vector<MineRecord> load_mines(const std::filesystem::path& path) { return parse_mines(io::read_file(path)); }

const std::vector<CityRecord>& FilteredVocabulary::cities_of(const std::string& word) const {
    static const std::vector<CityRecord> none;
    auto it = city_index.find(word);
    return it == city_index.end() ? none : it->second;
}

bool FilteredVocabulary::contains(const std::string& word) const {
    return std::find(words.begin(), words.end(), word) != words.end();
}

std::map<std::string, std::vector<CityRecord>> index_single_token_cities(const std::vector<CityRecord>& cities) {
    std::map<std::string, std::vector<CityRecord>> idx;
    for (const auto& c : cities)
        if (c.city_ascii.find(' ') == std::string::npos) idx[c.city_ascii].push_back(c);
    return idx;
}

FilteredVocabulary filter_vocabulary(const EmbeddingTable& table, const std::unordered_set<std::string>& english,
                                     const std::vector<CityRecord>& cities) {
    const auto idx = index_single_token_cities(cities);
    FilteredVocabulary fv;
    for (const auto& w : table.vocabulary.words()) {
        auto it = idx.find(w);
        const bool is_city = it != idx.end();
        if (!is_city && !english.contains(w)) continue;
        fv.words.push_back(w);
        if (is_city) fv.city_index.emplace(w, it->second);
    }
    return fv;
}

}  // namespace geoglove
