#include "fixtures.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <stdexcept>

#include "geoglove/benchmark.hpp"
#include "geoglove/corpus.hpp"
#include "geoglove/io.hpp"
#include "geoglove/rng.hpp"

using geoglove::CityRecord;
using geoglove::MineRecord;
using geoglove::Rng;
using geoglove::nn::Tensor;

namespace fixtures {

fs::path test_data_dir() { return fs::path(GEOGLOVE_SOURCE_DIR) / "tests" / "data"; }
fs::path repo_data_dir() { return fs::path(GEOGLOVE_SOURCE_DIR) / "data"; }

TempDir::TempDir(const std::string& tag) {
    static int counter = 0;
    Rng rng(geoglove::fnv1a64(tag) ^ static_cast<std::uint64_t>(++counter) ^
            static_cast<std::uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count()));
    path_ = fs::temp_directory_path() / ("geoglove-" + tag + "-" + std::to_string(rng.next_u64() % 1000000007));
    fs::remove_all(path_);
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

void write_text(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + p.string());
}

Tensor synthetic_embeddings(std::size_t n, std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    constexpr std::size_t kFeatures = 4;
    std::vector<double> offset(dim), mix(dim * kFeatures);
    for (auto& o : offset) o = 0.15 * rng.normal();
    for (auto& m : mix) m = 0.2 * rng.normal();
    Tensor x(n, dim);
    for (std::size_t i = 0; i < n; ++i) {
        const double z1 = rng.normal(), z2 = rng.normal();
        const double f[kFeatures] = {z1, z2, std::sin(2.0 * z1), z1 * z2 * 0.5};
        for (std::size_t j = 0; j < dim; ++j) {
            double v = offset[j];
            for (std::size_t k = 0; k < kFeatures; ++k) v += mix[j * kFeatures + k] * f[k];
            x(i, j) = v + 0.02 * rng.normal();
        }
    }
    return x;
}

// ---------------------------------------------------------------------------
// Planted-resource world

namespace {

const char* kConsonants = "bdfgklmnprstvz";
const char* kVowels = "aeiou";

std::string random_name(Rng& rng) {
    const std::size_t syllables = 2 + rng.below(2);
    std::string s;
    for (std::size_t i = 0; i < syllables; ++i) {
        s += kConsonants[rng.below(14)];
        s += kVowels[rng.below(5)];
    }
    s += rng.below(2) ? "ro" : "na";
    return s;
}

std::string join_words(const std::vector<std::string>& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + w[i];
    return s;
}

const std::vector<std::string> kLithiumContext{"lithium", "pegmatite", "spodumene", "lepidolite", "brine"};
const std::vector<std::string> kDecoyContext[2] = {{"copper", "porphyry", "chalcopyrite", "malachite"},
                                                  {"gold", "placer", "nugget", "alluvial"}};
const std::vector<std::string> kNeutral{"river",  "market", "harbour", "railway", "festival", "school",
                                        "bridge", "valley", "museum",  "garden",  "station",  "village"};

}  // namespace

PlantedWorld make_planted_world(std::uint64_t seed, const fs::path& dir) {
    Rng rng(geoglove::derive_seed(seed, "fixture.world"));
    PlantedWorld w;
    fs::create_directories(dir);

    const auto stops = geoglove::StopWordList::load(repo_data_dir() / "stopwords_en.txt");
    std::set<std::string> used(kNeutral.begin(), kNeutral.end());
    used.insert(kLithiumContext.begin(), kLithiumContext.end());
    for (const auto& d : kDecoyContext) used.insert(d.begin(), d.end());
    auto fresh_name = [&] {
        for (;;) {
            std::string s = random_name(rng);
            if (used.contains(s) || stops.contains(s) || geoglove::porter_stem(s) != s) continue;
            used.insert(s);
            return s;
        }
    };

    // One lithium mine away from the poles so 50 km offsets stay simple.
    const double mlat = rng.uniform(-50.0, 50.0), mlng = rng.uniform(-170.0, 170.0);
    w.mines.push_back({"Lithium Mine A", mlat, mlng, "lithium"});

    constexpr std::size_t kCities = 200;
    for (std::size_t i = 0; i < kCities; ++i) {
        CityRecord c;
        c.city_ascii = fresh_name();
        c.city = c.city_ascii;
        c.city[0] = static_cast<char>(c.city[0] - 'a' + 'A');
        if (i < 3) {
            // Planted: 5-40 km from the mine.
            const double d = rng.uniform(5.0, 40.0), theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
            c.lat = mlat + d / 111.2 * std::cos(theta);
            c.lng = mlng + d / (111.2 * std::cos(mlat * std::numbers::pi / 180.0)) * std::sin(theta);
            if (geoglove::haversine_km({c.lat, c.lng}, {mlat, mlng}) >= 50.0)
                throw std::logic_error("planted city too far from its mine");
            w.planted.push_back(c.city_ascii);
        } else {
            c.lat = rng.uniform(-60.0, 70.0);
            c.lng = rng.uniform(-180.0, 180.0);
        }
        c.country = "Testland";
        c.iso2 = "TL";
        c.iso3 = "TLD";
        c.admin_name = "Province " + std::to_string(i % 17);
        c.file_order = i;
        w.cities.push_back(c);
    }
    const std::string decoys[2] = {w.cities[3 + rng.below(kCities - 3)].city_ascii,
                                   w.cities[3 + rng.below(kCities - 3)].city_ascii};

    auto pick = [&](const std::vector<std::string>& from, std::size_t n, std::vector<std::string>& into) {
        for (std::size_t i = 0; i < n; ++i) into.push_back(from[rng.below(from.size())]);
    };
    std::string corpus;
    int doc = 0;
    auto add_doc = [&](std::vector<std::string> words) {
        rng.shuffle(words);
        corpus += "doc" + std::to_string(doc++) + "\t" + join_words(words) + ".\n";
    };
    for (int i = 0; i < 60; ++i) {
        std::vector<std::string> words;
        pick(kLithiumContext, 5, words);
        words.push_back("lithium");
        words.push_back(w.planted[i % 3]);
        words.push_back(w.planted[i % 3]);
        pick(kNeutral, 3, words);
        add_doc(words);
    }
    for (int i = 0; i < 60; ++i) {
        std::vector<std::string> words;
        pick(kDecoyContext[i % 2], 6, words);
        words.push_back(decoys[i % 2]);
        words.push_back(decoys[i % 2]);
        pick(kNeutral, 3, words);
        add_doc(words);
    }
    for (int i = 0; i < 40; ++i) {
        std::vector<std::string> words;
        pick(kNeutral, 10, words);
        add_doc(words);
    }
    write_text(dir / "corpus.tsv", corpus);

    std::string cities = "city,city_ascii,lat,lng,country,iso2,iso3,admin_name\n";
    for (const auto& c : w.cities)
        cities += c.city + "," + c.city_ascii + "," + geoglove::io::format_full(c.lat) + "," +
                  geoglove::io::format_full(c.lng) + "," + c.country + "," + c.iso2 + "," + c.iso3 + "," +
                  c.admin_name + "\n";
    write_text(dir / "cities.csv", cities);

    std::string mines = "name,lat,lng,commodity\n";
    for (const auto& m : w.mines)
        mines += m.name + "," + geoglove::io::format_full(m.lat) + "," + geoglove::io::format_full(m.lng) + "," +
                 m.commodity + "\n";
    write_text(dir / "mines.csv", mines);

    std::string english;
    for (const auto& word : used) english += word + "\n";
    write_text(dir / "english.txt", english);

    write_text(dir / "pipeline.conf",
               "[paths]\n"
               "corpus = corpus.tsv\n"
               "stopwords = " + (repo_data_dir() / "stopwords_en.txt").string() + "\n"
               "english_words = english.txt\n"
               "cities = cities.csv\n"
               "mines = mines.csv\n"
               "output_dir = out\n"
               "\n[pipeline]\nkeyword = lithium\nk = 10\nseed = " + std::to_string(seed) + "\n"
               "\n[glove]\ndim = 16\nwindow = 5\nepochs = 40\nmin_count = 3\n"
               "\n[reducers]\nkinds = none\n");
    w.config = dir / "pipeline.conf";
    return w;
}

geoglove::PipelineConfig small_config(const PlantedWorld& world, const fs::path& out_dir) {
    geoglove::PipelineConfig c = geoglove::load_config(world.config);
    c.output_dir = out_dir;
    c.glove.epochs = 15;
    c.reducers.clear();
    for (auto kind : geoglove::all_kinds()) {
        geoglove::ReducerSpec r;
        r.kind = kind;
        r.hidden_dims = {8, 4};
        r.epochs = 3;
        r.batch_size = 16;
        r.lstm_steps = 4;
        r.lstm_features = 4;
        r.lstm_hidden = 6;
        c.reducers.push_back(r);
    }
    c.derive_stage_seeds();
    return c;
}

}  // namespace fixtures
