#include <doctest.h>

#include <unordered_set>

#include "fixtures.hpp"
#include "geoglove/error.hpp"
#include "geoglove/gazetteer.hpp"
#include "geoglove/rng.hpp"

using namespace geoglove;

namespace {

const std::string kHeader = "city,city_ascii,lat,lng,country,iso2,iso3,admin_name\n";

EmbeddingTable table_of(const std::vector<std::string>& words) {
    EmbeddingTable t;
    t.vocabulary = Vocabulary(words, std::vector<std::uint64_t>(words.size(), 1));
    t.dim = 2;
    t.data.assign(words.size() * 2, 1.0);
    return t;
}

CityRecord city(const std::string& key, std::size_t order = 0) {
    CityRecord c;
    c.city = key;
    c.city_ascii = key;
    c.file_order = order;
    return c;
}

}  // namespace

TEST_CASE("Tokyo row parses") {
    const auto rows = parse_cities(kHeader + "Tokyo,Tokyo,35.6897,139.6922,Japan,JP,JPN,Tōkyō\n");
    REQUIRE(rows.size() == 1);
    const CityRecord& t = rows[0];
    CHECK(t.city == "Tokyo");
    CHECK(t.city_ascii == "tokyo");
    CHECK(t.lat == 35.6897);
    CHECK(t.lng == 139.6922);
    CHECK(t.country == "Japan");
    CHECK(t.iso2 == "JP");
    CHECK(t.iso3 == "JPN");
    CHECK(t.admin_name == "Tōkyō");
    CHECK(t.file_order == 0);
}

TEST_CASE("column order, extra columns, quoting and hyphenated headers") {
    const std::string text =
        "\xEF\xBB\xBF" "id,admin_name,city-ascii,city,lng,lat,iso3,iso2,country,population\n"
        "7,\"Ohio\",Wyoming,\"Wyoming\",-84.4657,39.2297,USA,US,United States,8500\n"
        "8,Michigan,Wyoming,Wyoming,-85.7060,42.8909,USA,US,\"United States\",76000\n"
        "9,\"Île-de-France\",\"Paris\",Paris,2.3522,48.8566,FRA,FR,France,\"11,000,000\"\n";
    const auto rows = parse_cities(text);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].admin_name == "Ohio");
    CHECK(rows[1].admin_name == "Michigan");
    CHECK(rows[1].file_order == 1);
    CHECK(rows[2].admin_name == "Île-de-France");
    CHECK(rows[2].lat == 48.8566);
}

TEST_CASE("coordinate and shape errors carry the line") {
    try {
        parse_cities(kHeader + "Tokyo,Tokyo,35,139,Japan,JP,JPN,Tokyo\nX,X,95,0,C,CC,CCC,A\n");
        FAIL("expected RangeError");
    } catch (const RangeError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_cities(kHeader + "X,X,0,181,C,CC,CCC,A\n"), RangeError);
    try {
        parse_cities(kHeader + "X,X,abc,0,C,CC,CCC,A\n");
        FAIL("expected ParseError");
    } catch (const RangeError&) {
        FAIL("not a range problem");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_cities(kHeader + "X,X,0,0,C\n"), ParseError);
    CHECK_THROWS_AS(parse_cities("city,lat,lng\nX,0,0\n"), ParseError);
    CHECK_THROWS_AS(parse_cities(""), ParseError);
}

TEST_CASE("city keys") {
    CHECK(normalize_city_key("New York") == "new york");
    CHECK(normalize_city_key("Winston-Salem") == "winston salem");
    CHECK(normalize_city_key("  St. Louis ") == "st louis");
    CHECK(normalize_city_key("123").empty());
}

TEST_CASE("duplicate city names are all kept") {
    const auto rows = parse_cities(kHeader + "Wyoming,Wyoming,39.23,-84.47,United States,US,USA,Ohio\n"
                                             "Wyoming,Wyoming,42.89,-85.71,United States,US,USA,Michigan\n"
                                             "New York,New York,40.69,-73.92,United States,US,USA,New York\n");
    const auto index = index_single_token_cities(rows);
    REQUIRE(index.count("wyoming"));
    CHECK(index.at("wyoming").size() == 2);
    CHECK(index.at("wyoming")[0].admin_name == "Ohio");
    CHECK(index.at("wyoming")[1].admin_name == "Michigan");
    CHECK_FALSE(index.count("new york"));
    CHECK_FALSE(index.count("new"));
}

TEST_CASE("mines") {
    const auto mines = parse_mines("name,lat,lng,commodity\nA,1,2,lithium\n\"B, north\",-3,4,lithium\nC,5,-6,tin\n");
    REQUIRE(mines.size() == 3);
    CHECK(mines[1].name == "B, north");
    CHECK(mines[2].commodity == "tin");
    CHECK_THROWS_AS(parse_mines("name,lat,lng,commodity\n"), EmptyMineSet);
    CHECK_THROWS_AS(parse_mines(""), EmptyMineSet);
    CHECK_THROWS_AS(parse_mines("name,lat,lng,commodity\nA,0,-200,lithium\n"), RangeError);
}

TEST_CASE("files load") {
    fixtures::TempDir dir("gaz");
    fixtures::write_text(dir / "c.csv", kHeader + "Tokyo,Tokyo,35.6897,139.6922,Japan,JP,JPN,Tokyo\r\n");
    fixtures::write_text(dir / "m.csv", "name,lat,lng,commodity\nA,1,2,lithium\n");
    CHECK(load_cities(dir / "c.csv").size() == 1);
    CHECK(load_mines(dir / "m.csv").size() == 1);
    CHECK_THROWS(load_cities(dir / "missing.csv"));
}

TEST_CASE("filter_vocabulary keeps English words and city names") {
    const auto t = table_of({"pegmatite", "zzxq", "tokyo"});
    const auto f = filter_vocabulary(t, {"pegmatite"}, {city("tokyo")});
    CHECK(f.words == std::vector<std::string>{"pegmatite", "tokyo"});
    CHECK(f.cities_of("tokyo").size() == 1);
    CHECK(f.cities_of("pegmatite").empty());
    CHECK_FALSE(f.contains("zzxq"));

    const auto w = filter_vocabulary(table_of({"wyoming"}), {}, {city("wyoming", 0), city("wyoming", 1)});
    CHECK(w.cities_of("wyoming").size() == 2);

    const auto none = filter_vocabulary(t, {"pegmatite", "tokyo", "absent"}, {});
    CHECK(none.words == std::vector<std::string>{"pegmatite", "tokyo"});
    CHECK(none.city_index.empty());
}

TEST_CASE("filtering is monotone and indexes by key") {
    Rng rng(3);
    std::vector<std::string> words;
    for (int i = 0; i < 40; ++i) words.push_back("w" + std::to_string(i));
    const auto t = table_of(words);
    for (int trial = 0; trial < 30; ++trial) {
        std::unordered_set<std::string> english;
        std::vector<CityRecord> cities;
        for (int i = 0; i < 10; ++i) english.insert(words[rng.below(40)]);
        for (int i = 0; i < 10; ++i) cities.push_back(city(words[rng.below(40)], cities.size()));
        const auto small = filter_vocabulary(t, english, cities);
        for (int i = 0; i < 5; ++i) english.insert(words[rng.below(40)]);
        for (int i = 0; i < 5; ++i) cities.push_back(city(words[rng.below(40)], cities.size()));
        const auto big = filter_vocabulary(t, english, cities);
        for (const auto& w : small.words) CHECK(big.contains(w));
        for (const auto& [key, rows] : big.city_index) {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                CHECK(rows[i].city_ascii == key);
                if (i) CHECK(rows[i - 1].file_order < rows[i].file_order);
            }
        }
    }
}
