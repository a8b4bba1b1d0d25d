// geoglove: corpus -> embeddings -> reducers -> city rankings -> mine distance benchmark.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "geoglove/pipeline.hpp"

using namespace geoglove;

namespace {

struct Common {
    std::string config;
    std::string out;
    std::string keyword;
    std::optional<std::uint64_t> seed;
    std::string corpus, stopwords, english_words, cities, mines;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "pipeline config file");
    sub->add_option("--out", c.out, "output directory (overrides paths.output_dir)");
    sub->add_option("--seed", c.seed, "global seed (overrides pipeline.seed)");
    sub->add_option("--keyword", c.keyword, "query keyword (overrides pipeline.keyword)");
    sub->add_option("--corpus", c.corpus, "corpus directory or id<TAB>text file");
    sub->add_option("--stopwords", c.stopwords, "stop-word list");
    sub->add_option("--english-words", c.english_words, "English word list");
    sub->add_option("--cities", c.cities, "cities CSV");
    sub->add_option("--mines", c.mines, "mines CSV");
}

PipelineConfig build_config(const Common& c) {
    PipelineConfig cfg = c.config.empty() ? parse_config("") : load_config(c.config);
    auto set = [](std::filesystem::path& dst, const std::string& v) {
        if (!v.empty()) dst = std::filesystem::path(v).lexically_normal();
    };
    set(cfg.corpus, c.corpus);
    set(cfg.stopwords, c.stopwords);
    set(cfg.english_words, c.english_words);
    set(cfg.cities, c.cities);
    set(cfg.mines, c.mines);
    set(cfg.output_dir, c.out);
    if (!c.keyword.empty()) cfg.keyword = c.keyword;
    if (c.seed) cfg.seed = *c.seed;
    cfg.derive_stage_seeds();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rank gazetteer cities against a keyword using GloVe embeddings"};
    app.require_subcommand(1);
    Common common;
    bool force = false;
    std::string kind;

    auto* train = app.add_subcommand("train", "tokenize the corpus and train embeddings");
    auto* reduce = app.add_subcommand("reduce", "fit every configured reducer");
    auto* rank = app.add_subcommand("rank", "rank cities by similarity to the keyword");
    auto* bench = app.add_subcommand("benchmark", "distance from ranked cities to the nearest mine");
    auto* all = app.add_subcommand("all", "run every stage, skipping up-to-date ones");
    for (auto* s : {train, reduce, rank, bench, all}) add_common(s, common);
    rank->add_option("--kind", kind, "only this reducer kind");
    all->add_flag("--force", force, "re-run every stage");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    return run_guarded(std::cerr, [&] {
        Pipeline p(build_config(common), std::cout, std::cerr);
        if (*train) p.train();
        else if (*reduce) p.reduce();
        else if (*rank) p.rank(kind.empty() ? std::nullopt : std::optional(parse_kind(kind)));
        else if (*bench) p.benchmark();
        else if (*all) p.all(force);
        return static_cast<int>(kExitOk);
    });
}
