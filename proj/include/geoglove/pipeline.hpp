#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "geoglove/error.hpp"
#include "geoglove/gazetteer.hpp"
#include "geoglove/glove.hpp"
#include "geoglove/reducers.hpp"

namespace geoglove {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitInput = 2,
    kExitUnknownKeyword = 3,
    kExitMissingArtifact = 4,
};

/// A stage input produced by an earlier stage is missing.
class MissingArtifact : public Error {
public:
    explicit MissingArtifact(const std::filesystem::path& p)
        : Error("missing stage artifact " + p.string() + " (run the producing stage first)"), path_(p) {}
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

/// A stage finished with failures that were already reported; carries the
/// exit code of the first one.
class StageFailed : public Error {
public:
    StageFailed(const std::string& what, int code) : Error(what), code_(code) {}
    int code() const noexcept { return code_; }

private:
    int code_;
};

struct PipelineConfig {
    std::filesystem::path corpus;
    std::filesystem::path stopwords;
    std::filesystem::path english_words;
    std::filesystem::path cities;
    std::filesystem::path mines;
    std::filesystem::path output_dir;
    std::string keyword = "lithium";
    std::size_t k = 10;
    std::uint64_t seed = 42;
    GloveConfig glove;
    std::vector<ReducerSpec> reducers;  // seeds are derived from `seed` per kind

    /// Derives the GloVe and per-reducer seeds from `seed`.
    void derive_stage_seeds();
};

/// Flat `key = value` lines under `[section]` headers, `#` comments.
/// Relative paths resolve against `base_dir`. Throws ConfigError.
PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);
/// Canonical text form; parse_config(format_config(c)) == c up to path spelling.
std::string format_config(const PipelineConfig& config);

/// Fixed artifact names inside the output directory.
struct ArtifactPaths {
    std::filesystem::path dir;

    std::filesystem::path config() const { return dir / "pipeline.conf"; }
    std::filesystem::path embeddings() const { return dir / "embeddings.txt"; }
    std::filesystem::path loss_trace() const { return dir / "glove_loss.csv"; }
    std::filesystem::path model(ReducerKind k) const;
    std::filesystem::path trace(ReducerKind k) const;
    std::filesystem::path ranking(ReducerKind k) const;
    std::filesystem::path report(ReducerKind k) const;
    std::filesystem::path geojson(ReducerKind k) const;
    std::filesystem::path summary() const { return dir / "summary.csv"; }
};

/// Runs pipeline stages against a config. Stage methods throw library errors;
/// `run_guarded` maps them to exit codes.
class Pipeline {
public:
    Pipeline(PipelineConfig config, std::ostream& out, std::ostream& err);

    /// Corpus -> embeddings.txt + glove_loss.csv. Returns the vocabulary size.
    std::size_t train();
    /// Fits every configured reducer; failures are reported per kind and the
    /// rest continue, then StageFailed is thrown if any kind failed.
    void reduce();
    /// Writes ranking_<kind>.csv for one kind, or every configured kind.
    void rank(std::optional<ReducerKind> kind = std::nullopt);
    /// Writes report/geojson per kind and summary.csv.
    void benchmark();
    /// Every stage in order, skipping those whose outputs are newer than their
    /// inputs unless `force`. Returns the number of stages executed.
    std::size_t all(bool force);

    const PipelineConfig& config() const noexcept { return config_; }
    const ArtifactPaths& paths() const noexcept { return paths_; }

private:
    void write_effective_config();
    void require(const std::filesystem::path& p) const;
    EmbeddingTable load_table() const;
    FilteredVocabulary load_filtered(const EmbeddingTable& table) const;
    /// Returns 0, or the exit code of the failure after reporting it.
    int reduce_kind(const ReducerSpec& spec, const EmbeddingTable& table);
    void rank_kind(ReducerKind kind, const EmbeddingTable& table, const FilteredVocabulary& fvocab);
    std::vector<ReducerKind> kinds() const;

    PipelineConfig config_;
    ArtifactPaths paths_;
    std::ostream& out_;
    std::ostream& err_;
};

/// Runs `fn`, printing errors to `err`, and returns the matching exit code.
template <typename Fn>
int run_guarded(std::ostream& err, Fn&& fn);

int exit_code_for(const std::exception& e);

template <typename Fn>
int run_guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace geoglove
