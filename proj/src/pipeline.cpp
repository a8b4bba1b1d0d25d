#include "geoglove/pipeline.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <unordered_set>

#include "geoglove/benchmark.hpp"
#include "geoglove/corpus.hpp"
#include "geoglove/io.hpp"
#include "geoglove/ranking.hpp"
#include "geoglove/rng.hpp"

namespace fs = std::filesystem;

namespace geoglove {

// ---------------------------------------------------------------------------
// Config

void PipelineConfig::derive_stage_seeds() {
    glove.seed = derive_seed(seed, "glove");
    for (auto& r : reducers) r.seed = derive_seed(seed, "reducer." + std::string(kind_name(r.kind)));
}

namespace {

using Section = std::map<std::string, std::pair<std::string, std::size_t>>;  // key -> (value, line)

std::size_t to_size(const std::string& v, const std::string& key, std::size_t line, long long min) {
    long long x;
    if (!io::parse_int(v, x) || x < min)
        throw ConfigError(key + " must be an integer >= " + std::to_string(min) + " (line " + std::to_string(line) +
                          ")");
    return static_cast<std::size_t>(x);
}

double to_double(const std::string& v, const std::string& key, std::size_t line) {
    double x;
    if (!io::parse_double(v, x)) throw ConfigError(key + " must be a number (line " + std::to_string(line) + ")");
    return x;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        std::size_t end = v.find(',', start);
        if (end == std::string::npos) end = v.size();
        const auto item = io::trim(std::string_view(v).substr(start, end - start));
        if (!item.empty()) out.emplace_back(item);
        start = end + 1;
    }
    return out;
}

void apply_reducer_keys(ReducerSpec& r, const Section& sec, const std::string& prefix) {
    for (const auto& [key, vl] : sec) {
        const auto& [v, line] = vl;
        const std::string name = prefix + "." + key;
        if (key == "kinds") continue;
        if (key == "latent_dim") r.latent_dim = to_size(v, name, line, 1);
        else if (key == "hidden_dims") {
            r.hidden_dims.clear();
            for (const auto& h : split_list(v)) r.hidden_dims.push_back(to_size(h, name, line, 1));
        } else if (key == "epochs") r.epochs = static_cast<int>(to_size(v, name, line, 1));
        else if (key == "batch_size") r.batch_size = to_size(v, name, line, 1);
        else if (key == "lr") r.lr = to_double(v, name, line);
        else if (key == "kl_weight") r.kl_weight = to_double(v, name, line);
        else if (key == "lstm_steps") r.lstm_steps = to_size(v, name, line, 1);
        else if (key == "lstm_features") r.lstm_features = to_size(v, name, line, 1);
        else if (key == "lstm_hidden") r.lstm_hidden = to_size(v, name, line, 1);
        else throw ConfigError("unknown key " + name + " (line " + std::to_string(line) + ")");
    }
}

fs::path resolve(const std::string& v, const fs::path& base) {
    fs::path p(v);
    if (p.is_relative() && !base.empty()) p = base / p;
    return p.lexically_normal();
}

std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out;
}

}  // namespace

PipelineConfig parse_config(const std::string& text, const fs::path& base_dir) {
    std::map<std::string, Section> sections;
    std::string current;
    const auto lines = io::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view l = lines[i];
        if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
        l = io::trim(l);
        if (l.empty()) continue;
        if (l.front() == '[') {
            if (l.back() != ']') throw ConfigError("unterminated section header (line " + std::to_string(i + 1) + ")");
            current = std::string(io::trim(l.substr(1, l.size() - 2)));
            sections[current];
            continue;
        }
        const auto eq = l.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("expected key = value (line " + std::to_string(i + 1) + ")");
        if (current.empty()) throw ConfigError("key outside a section (line " + std::to_string(i + 1) + ")");
        std::string key(io::trim(l.substr(0, eq)));
        std::replace(key.begin(), key.end(), '-', '_');
        sections[current][key] = {std::string(io::trim(l.substr(eq + 1))), i + 1};
    }

    PipelineConfig c;
    for (const auto& [name, sec] : sections) {
        if (name == "paths") {
            for (const auto& [key, vl] : sec) {
                const fs::path p = resolve(vl.first, base_dir);
                if (key == "corpus") c.corpus = p;
                else if (key == "stopwords") c.stopwords = p;
                else if (key == "english_words") c.english_words = p;
                else if (key == "cities") c.cities = p;
                else if (key == "mines") c.mines = p;
                else if (key == "output_dir") c.output_dir = p;
                else throw ConfigError("unknown key paths." + key + " (line " + std::to_string(vl.second) + ")");
            }
        } else if (name == "pipeline") {
            for (const auto& [key, vl] : sec) {
                const auto& [v, line] = vl;
                if (key == "keyword") c.keyword = v;
                else if (key == "k") c.k = to_size(v, "pipeline.k", line, 1);
                else if (key == "seed") c.seed = to_size(v, "pipeline.seed", line, 0);
                else throw ConfigError("unknown key pipeline." + key + " (line " + std::to_string(line) + ")");
            }
        } else if (name == "glove") {
            for (const auto& [key, vl] : sec) {
                const auto& [v, line] = vl;
                const std::string n = "glove." + key;
                if (key == "dim") c.glove.dim = static_cast<int>(to_size(v, n, line, 1));
                else if (key == "window") c.glove.window = static_cast<int>(to_size(v, n, line, 1));
                else if (key == "x_max") c.glove.x_max = to_double(v, n, line);
                else if (key == "alpha") c.glove.alpha = to_double(v, n, line);
                else if (key == "lr") c.glove.lr = to_double(v, n, line);
                else if (key == "epochs") c.glove.epochs = static_cast<int>(to_size(v, n, line, 1));
                else if (key == "min_count") c.glove.min_count = to_size(v, n, line, 1);
                else throw ConfigError("unknown key " + n + " (line " + std::to_string(line) + ")");
            }
        } else if (name != "reducers" && name.rfind("reducer.", 0) != 0) {
            throw ConfigError("unknown section [" + name + "]");
        }
    }

    ReducerSpec base;
    std::vector<std::string> kinds{"none", "pca", "ae", "vae", "vae-lstm"};
    if (auto it = sections.find("reducers"); it != sections.end()) {
        apply_reducer_keys(base, it->second, "reducers");
        if (auto k = it->second.find("kinds"); k != it->second.end()) kinds = split_list(k->second.first);
    }
    std::unordered_set<std::string> seen;
    for (const auto& kn : kinds) {
        ReducerSpec r = base;
        r.kind = parse_kind(kn);
        if (!seen.insert(std::string(kind_name(r.kind))).second) throw ConfigError("reducer kind " + kn + " listed twice");
        if (auto it = sections.find("reducer." + std::string(kind_name(r.kind))); it != sections.end())
            apply_reducer_keys(r, it->second, "reducer." + std::string(kind_name(r.kind)));
        c.reducers.push_back(r);
    }
    for (const auto& [name, sec] : sections)
        if (name.rfind("reducer.", 0) == 0 && !seen.contains(std::string(kind_name(parse_kind(name.substr(8))))))
            throw ConfigError("[" + name + "] configures a kind missing from reducers.kinds");

    c.glove.validate();
    c.derive_stage_seeds();
    return c;
}

PipelineConfig load_config(const fs::path& path) {
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const std::exception& e) {
        throw ConfigError("cannot read config " + path.string() + ": " + e.what());
    }
    return parse_config(text, path.parent_path());
}

std::string format_config(const PipelineConfig& c) {
    std::string out;
    out += "[paths]\n";
    out += "corpus = " + c.corpus.generic_string() + "\n";
    out += "stopwords = " + c.stopwords.generic_string() + "\n";
    out += "english_words = " + c.english_words.generic_string() + "\n";
    out += "cities = " + c.cities.generic_string() + "\n";
    out += "mines = " + c.mines.generic_string() + "\n";
    out += "output_dir = " + c.output_dir.generic_string() + "\n";
    out += "\n[pipeline]\n";
    out += "keyword = " + c.keyword + "\n";
    out += "k = " + std::to_string(c.k) + "\n";
    out += "seed = " + std::to_string(c.seed) + "\n";
    out += "\n[glove]\n";
    out += "dim = " + std::to_string(c.glove.dim) + "\n";
    out += "window = " + std::to_string(c.glove.window) + "\n";
    out += "x_max = " + io::format_shortest(c.glove.x_max) + "\n";
    out += "alpha = " + io::format_shortest(c.glove.alpha) + "\n";
    out += "lr = " + io::format_shortest(c.glove.lr) + "\n";
    out += "epochs = " + std::to_string(c.glove.epochs) + "\n";
    out += "min_count = " + std::to_string(c.glove.min_count) + "\n";
    out += "\n[reducers]\nkinds = ";
    for (std::size_t i = 0; i < c.reducers.size(); ++i) out += (i ? ", " : "") + std::string(kind_name(c.reducers[i].kind));
    out += "\n";
    for (const auto& r : c.reducers) {
        out += "\n[reducer." + std::string(kind_name(r.kind)) + "]\n";
        out += "latent_dim = " + std::to_string(r.latent_dim) + "\n";
        out += "hidden_dims = " + join_sizes(r.hidden_dims) + "\n";
        out += "epochs = " + std::to_string(r.epochs) + "\n";
        out += "batch_size = " + std::to_string(r.batch_size) + "\n";
        out += "lr = " + io::format_shortest(r.lr) + "\n";
        out += "kl_weight = " + io::format_shortest(r.kl_weight) + "\n";
        out += "lstm_steps = " + std::to_string(r.lstm_steps) + "\n";
        out += "lstm_features = " + std::to_string(r.lstm_features) + "\n";
        out += "lstm_hidden = " + std::to_string(r.lstm_hidden) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Artifacts

namespace {
fs::path named(const fs::path& dir, const char* prefix, ReducerKind k, const char* ext) {
    return dir / (std::string(prefix) + std::string(kind_name(k)) + ext);
}
}  // namespace

fs::path ArtifactPaths::model(ReducerKind k) const { return named(dir, "model_", k, ".txt"); }
fs::path ArtifactPaths::trace(ReducerKind k) const { return named(dir, "trace_", k, ".csv"); }
fs::path ArtifactPaths::ranking(ReducerKind k) const { return named(dir, "ranking_", k, ".csv"); }
fs::path ArtifactPaths::report(ReducerKind k) const { return named(dir, "report_", k, ".csv"); }
fs::path ArtifactPaths::geojson(ReducerKind k) const { return named(dir, "map_", k, ".geojson"); }

int exit_code_for(const std::exception& e) {
    if (auto* s = dynamic_cast<const StageFailed*>(&e)) return s->code();
    if (dynamic_cast<const UnknownKeyword*>(&e)) return kExitUnknownKeyword;
    if (dynamic_cast<const MissingArtifact*>(&e)) return kExitMissingArtifact;
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
        dynamic_cast<const DuplicateDocumentId*>(&e) || dynamic_cast<const EmptyVocabulary*>(&e) ||
        dynamic_cast<const DimensionMismatch*>(&e) || dynamic_cast<const EmptyMineSet*>(&e) ||
        dynamic_cast<const KindMismatch*>(&e) || dynamic_cast<const EmptyRows*>(&e) ||
        dynamic_cast<const fs::filesystem_error*>(&e))
        return kExitInput;
    return kExitInternal;
}

// ---------------------------------------------------------------------------
// Stages

namespace {

void need_path(const fs::path& p, const char* key) {
    if (p.empty())
        throw ConfigError(std::string("no ") + key + " path given: set " + key + " under [paths] or pass --" +
                          std::string(key == std::string("english_words") ? "english-words" : key));
}

void need_readable(const fs::path& p, const char* key) {
    need_path(p, key);
    if (!fs::exists(p)) throw ConfigError(std::string(key) + " not found: " + p.string());
}

/// Outputs all exist and none is older than the newest input.
bool up_to_date(const std::vector<fs::path>& inputs, const std::vector<fs::path>& outputs) {
    if (outputs.empty()) return false;
    fs::file_time_type oldest_out = fs::file_time_type::max();
    for (const auto& o : outputs) {
        std::error_code ec;
        const auto t = fs::last_write_time(o, ec);
        if (ec) return false;
        oldest_out = std::min(oldest_out, t);
    }
    for (const auto& i : inputs) {
        std::error_code ec;
        const auto t = fs::last_write_time(i, ec);
        if (ec || t > oldest_out) return false;
    }
    return true;
}

}  // namespace

Pipeline::Pipeline(PipelineConfig config, std::ostream& out, std::ostream& err)
    : config_(std::move(config)), out_(out), err_(err) {
    need_path(config_.output_dir, "output_dir");
    paths_.dir = config_.output_dir;
}

void Pipeline::write_effective_config() {
    fs::create_directories(paths_.dir);
    const std::string text = format_config(config_);
    std::error_code ec;
    if (fs::exists(paths_.config(), ec)) {
        if (io::read_file(paths_.config()) == text) return;
    }
    io::write_atomic(paths_.config(), text);
}

void Pipeline::require(const fs::path& p) const {
    if (!fs::exists(p)) throw MissingArtifact(p);
}

std::vector<ReducerKind> Pipeline::kinds() const {
    std::vector<ReducerKind> ks;
    for (const auto& r : config_.reducers) ks.push_back(r.kind);
    return ks;
}

std::size_t Pipeline::train() {
    need_readable(config_.corpus, "corpus");
    need_readable(config_.stopwords, "stopwords");
    write_effective_config();
    const auto docs = load_corpus(config_.corpus);
    const auto stops = StopWordList::load(config_.stopwords);
    const auto streams = process_corpus(docs, stops);
    const Vocabulary vocab = build_vocabulary(streams, config_.glove.min_count);
    out_ << "vocabulary size: " << vocab.size() << "\n";
    const CoocMatrix cooc = accumulate_cooc(streams, vocab, config_.glove.window);
    const GloveResult res = train_glove(cooc, vocab, config_.glove);
    save_embeddings(res.table, paths_.embeddings());
    io::write_atomic(paths_.loss_trace(), format_loss_trace(res.loss_trace));
    out_ << "wrote " << paths_.embeddings().string() << "\n";
    return vocab.size();
}

EmbeddingTable Pipeline::load_table() const {
    require(paths_.embeddings());
    return load_embeddings(paths_.embeddings());
}

int Pipeline::reduce_kind(const ReducerSpec& spec, const EmbeddingTable& table) {
    const std::string name(kind_name(spec.kind));
    if (spec.kind == ReducerKind::None) {
        out_ << "[reduce:" << name << "] skipped (identity has no model)\n";
        return 0;
    }
    try {
        const ReducerModel model = fit_reducer(table, spec);
        save_model(model, paths_.model(spec.kind));
        io::write_atomic(paths_.trace(spec.kind), format_trace(model.trace));
        out_ << "[reduce:" << name << "] wrote " << paths_.model(spec.kind).string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        err_ << "[reduce:" << name << "] failed: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

void Pipeline::reduce() {
    write_effective_config();
    const EmbeddingTable table = load_table();
    int first = 0;
    std::size_t failed = 0;
    for (const auto& spec : config_.reducers) {
        const int code = reduce_kind(spec, table);
        if (code) {
            ++failed;
            if (!first) first = code;
        }
    }
    if (failed) throw StageFailed(std::to_string(failed) + " reducer(s) failed", first);
}

FilteredVocabulary Pipeline::load_filtered(const EmbeddingTable& table) const {
    need_readable(config_.english_words, "english_words");
    need_readable(config_.cities, "cities");
    const auto words = io::read_word_list(config_.english_words);
    const std::unordered_set<std::string> english(words.begin(), words.end());
    return filter_vocabulary(table, english, load_cities(config_.cities));
}

void Pipeline::rank_kind(ReducerKind kind, const EmbeddingTable& table, const FilteredVocabulary& fvocab) {
    ReducerModel model;
    model.spec.kind = ReducerKind::None;
    model.input_dim = table.dim;
    if (kind != ReducerKind::None) {
        require(paths_.model(kind));
        model = load_model(paths_.model(kind), kind);
        if (model.input_dim != table.dim)
            throw DimensionMismatch("model " + paths_.model(kind).string() + " expects dim " +
                                    std::to_string(model.input_dim) + ", embeddings have " + std::to_string(table.dim));
    }
    // The vocabulary holds stems; accept the keyword in either form.
    std::string keyword = config_.keyword;
    if (!table.vocabulary.index(keyword) && table.vocabulary.index(porter_stem(keyword))) keyword = porter_stem(keyword);
    ScoreResult scores;
    try {
        scores = score_all(keyword, table, model, fvocab);
    } catch (const UnknownKeyword&) {
        err_ << "keyword '" << config_.keyword << "' is not in the vocabulary; closest words:";
        for (const auto& s : suggest_words(config_.keyword, table.vocabulary)) err_ << " " << s;
        err_ << "\n";
        throw;
    }
    if (scores.skipped_zero) err_ << "warning: " << scores.skipped_zero << " words skipped (zero vector)\n";
    const TopCities top = top_k_cities(scores.scores, fvocab, config_.k);
    if (top.short_list)
        err_ << "warning: only " << top.rows.size() << " cities available for top " << config_.k << "\n";
    io::write_atomic(paths_.ranking(kind), format_ranking_csv(top.rows));
    out_ << technique_label(kind) << "\n" << format_ranking_table(top.rows) << "\n";
}

void Pipeline::rank(std::optional<ReducerKind> kind) {
    write_effective_config();
    const EmbeddingTable table = load_table();
    const FilteredVocabulary fvocab = load_filtered(table);
    if (kind) {
        rank_kind(*kind, table, fvocab);
        return;
    }
    for (ReducerKind k : kinds()) rank_kind(k, table, fvocab);
}

void Pipeline::benchmark() {
    write_effective_config();
    for (ReducerKind k : kinds()) require(paths_.ranking(k));
    need_readable(config_.mines, "mines");
    const auto mines = load_mines(config_.mines);
    std::vector<BenchmarkReport> reports;
    for (ReducerKind k : kinds()) {
        const auto ranked = parse_ranking_csv(io::read_file(paths_.ranking(k)));
        BenchmarkReport rep = evaluate_ranking(k, config_.keyword, ranked, mines);
        io::write_atomic(paths_.report(k), format_report_csv(rep));
        io::write_atomic(paths_.geojson(k), emit_geojson(rep, mines));
        reports.push_back(std::move(rep));
    }
    const std::string summary = format_summary_csv(reports);
    io::write_atomic(paths_.summary(), summary);
    out_ << summary;
}

std::size_t Pipeline::all(bool force) {
    write_effective_config();
    const fs::path conf = paths_.config();
    std::size_t executed = 0;
    auto stage = [&](const std::string& name, const std::vector<fs::path>& in, const std::vector<fs::path>& outs,
                     auto&& run) {
        if (!force && up_to_date(in, outs)) {
            out_ << "[" << name << "] skipped (up to date)\n";
            return;
        }
        out_ << "[" << name << "] running\n";
        run();
        ++executed;
    };

    need_readable(config_.corpus, "corpus");
    need_readable(config_.stopwords, "stopwords");
    std::vector<fs::path> train_in = corpus_files(config_.corpus);
    train_in.push_back(config_.stopwords);
    train_in.push_back(conf);
    stage("train", train_in, {paths_.embeddings(), paths_.loss_trace()}, [&] { train(); });

    std::optional<EmbeddingTable> table;
    auto get_table = [&]() -> const EmbeddingTable& {
        if (!table) table = load_table();
        return *table;
    };
    for (const auto& spec : config_.reducers) {
        if (spec.kind == ReducerKind::None) continue;
        stage("reduce:" + std::string(kind_name(spec.kind)), {paths_.embeddings(), conf},
              {paths_.model(spec.kind), paths_.trace(spec.kind)}, [&] {
                  if (int code = reduce_kind(spec, get_table()))
                      throw StageFailed("reducer " + std::string(kind_name(spec.kind)) + " failed", code);
              });
    }

    need_readable(config_.english_words, "english_words");
    need_readable(config_.cities, "cities");
    std::optional<FilteredVocabulary> fvocab;
    for (ReducerKind k : kinds()) {
        std::vector<fs::path> in{paths_.embeddings(), config_.english_words, config_.cities, conf};
        if (k != ReducerKind::None) in.push_back(paths_.model(k));
        stage("rank:" + std::string(kind_name(k)), in, {paths_.ranking(k)}, [&] {
            if (!fvocab) fvocab = load_filtered(get_table());
            rank_kind(k, get_table(), *fvocab);
        });
    }

    need_readable(config_.mines, "mines");
    std::vector<fs::path> bench_in{config_.mines, conf};
    std::vector<fs::path> bench_out{paths_.summary()};
    for (ReducerKind k : kinds()) {
        bench_in.push_back(paths_.ranking(k));
        bench_out.push_back(paths_.report(k));
        bench_out.push_back(paths_.geojson(k));
    }
    stage("benchmark", bench_in, bench_out, [&] { benchmark(); });
    return executed;
}

}  // namespace geoglove
