#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "geoglove/gazetteer.hpp"
#include "geoglove/nn/tensor.hpp"
#include "geoglove/pipeline.hpp"

namespace fixtures {

namespace fs = std::filesystem;

/// tests/data in the source tree.
fs::path test_data_dir();
/// data/ in the source tree (stop words, English word list).
fs::path repo_data_dir();

/// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

void write_text(const fs::path& p, const std::string& text);

/// 500 x 200 vectors on a smooth 2-D manifold plus a shared offset and
/// small isotropic noise.
geoglove::nn::Tensor synthetic_embeddings(std::size_t n = 500, std::size_t dim = 200, std::uint64_t seed = 2024);

/// Synthetic world for the planted-resource test: a gazetteer of random
/// cities, one lithium mine with three cities within 50 km, and a corpus in
/// which the keyword co-occurs with the planted city names only. Two decoy
/// cities appear in copper and gold contexts.
struct PlantedWorld {
    std::vector<geoglove::CityRecord> cities;
    std::vector<geoglove::MineRecord> mines;
    std::vector<std::string> planted;  // city words near the lithium mine
    fs::path config;                   // ready-to-run pipeline config
};

PlantedWorld make_planted_world(std::uint64_t seed, const fs::path& dir);

/// Small config for fast end-to-end runs of every reducer kind.
geoglove::PipelineConfig small_config(const PlantedWorld& world, const fs::path& out_dir);

}  // namespace fixtures
