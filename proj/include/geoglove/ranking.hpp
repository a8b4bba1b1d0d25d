#pragma once

#include <span>
#include <string>
#include <vector>

#include "geoglove/gazetteer.hpp"
#include "geoglove/glove.hpp"
#include "geoglove/reducers.hpp"

namespace geoglove {

struct SimilarityScore {
    std::string word;
    double score = 0.0;
};

struct RankedCity {
    std::size_t rank = 0;  // 1-based
    std::string word;
    CityRecord city;
    double score = 0.0;
};

/// u.v / (|u| |v|), clamped to [-1, 1]. Throws ZeroVector when either norm is
/// below 1e-12 and DimensionMismatch on unequal lengths.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

struct ScoreResult {
    std::vector<SimilarityScore> scores;  // filtered-vocabulary order, keyword excluded
    std::size_t skipped_zero = 0;         // words whose transformed vector had zero norm
};

/// Transforms the keyword and every filtered word with `model`, then scores
/// them in the reduced space. Throws UnknownKeyword.
ScoreResult score_all(const std::string& keyword, const EmbeddingTable& table, const ReducerModel& model,
                      const FilteredVocabulary& fvocab);

struct TopCities {
    std::vector<RankedCity> rows;
    bool short_list = false;  // fewer than k rows were available
};

/// Expands each city word into one row per matching gazetteer record, sorts by
/// score desc, word asc, gazetteer order, and keeps the first k.
TopCities top_k_cities(const std::vector<SimilarityScore>& scores, const FilteredVocabulary& fvocab, std::size_t k);

/// CSV `rank,word,city,admin_name,country,lat,lng,score`, score with 6 decimals.
std::string format_ranking_csv(const std::vector<RankedCity>& rows);
std::vector<RankedCity> parse_ranking_csv(const std::string& text);

/// Plain-text `Rank | City | Admin-name` table.
std::string format_ranking_table(const std::vector<RankedCity>& rows);

/// Up to `n` vocabulary words closest to `word` by edit distance.
std::vector<std::string> suggest_words(const std::string& word, const Vocabulary& vocab, std::size_t n = 3);

}  // namespace geoglove
