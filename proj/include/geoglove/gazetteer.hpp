#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "geoglove/glove.hpp"

namespace geoglove {

struct CityRecord {
    std::string city;
    std::string city_ascii;  // lowercase, [a-z][a-z ]*
    double lat = 0.0;
    double lng = 0.0;
    std::string country;
    std::string iso2;
    std::string iso3;
    std::string admin_name;
    std::size_t file_order = 0;  // 0-based data row index

    bool operator==(const CityRecord&) const = default;
};

struct MineRecord {
    std::string name;
    double lat = 0.0;
    double lng = 0.0;
    std::string commodity;

    bool operator==(const MineRecord&) const = default;
};

/// Lowercases and maps every non-letter run to a single space. Empty when
/// the name has no letters.
std::string normalize_city_key(std::string_view name);

/// Cities CSV with header columns city, city_ascii, lat, lng, country, iso2,
/// iso3, admin_name (any order, extra columns ignored, `-` accepted for `_`).
/// Throws ParseError / RangeError with the 1-based file line.
std::vector<CityRecord> parse_cities(const std::string& text);
std::vector<CityRecord> load_cities(const std::filesystem::path& path);

/// Mines CSV with header name, lat, lng, commodity. Throws EmptyMineSet.
std::vector<MineRecord> parse_mines(const std::string& text);
std::vector<MineRecord> load_mines(const std::filesystem::path& path);

struct FilteredVocabulary {
    std::vector<std::string> words;                          // table order
    std::map<std::string, std::vector<CityRecord>> city_index;  // only words with >= 1 city

    const std::vector<CityRecord>& cities_of(const std::string& word) const;
    bool contains(const std::string& word) const;
};

/// Single-token city key -> every gazetteer row with that key, file order.
std::map<std::string, std::vector<CityRecord>> index_single_token_cities(const std::vector<CityRecord>& cities);

/// Keeps a word when it is in `english` or names at least one single-token city.
FilteredVocabulary filter_vocabulary(const EmbeddingTable& table, const std::unordered_set<std::string>& english,
                                     const std::vector<CityRecord>& cities);

}  // namespace geoglove
