#pragma once

#include <span>
#include <string>
#include <vector>

#include "geoglove/gazetteer.hpp"
#include "geoglove/ranking.hpp"
#include "geoglove/reducers.hpp"

namespace geoglove {

inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
    double lat = 0.0;  // degrees
    double lng = 0.0;  // degrees

    /// Throws RangeError outside [-90, 90] x [-180, 180].
    static GeoPoint checked(double lat, double lng);
};

/// Great-circle distance on a sphere of radius 6371 km.
double haversine_km(GeoPoint p, GeoPoint q);

struct NearestMine {
    MineRecord mine;
    std::size_t index = 0;
    double distance_km = 0.0;
};

/// Closest mine by haversine distance; the first in file order wins ties.
/// Throws EmptyMineSet.
NearestMine nearest_mine(GeoPoint city, const std::vector<MineRecord>& mines);

struct CityError {
    RankedCity ranked;
    MineRecord nearest_mine;
    double distance_km = 0.0;
};

/// sqrt(mean(d^2)). Throws EmptyRows.
double rmse(std::span<const double> distances);
double rmse(const std::vector<CityError>& rows);

struct BenchmarkReport {
    ReducerKind technique = ReducerKind::None;
    std::string keyword;
    std::vector<CityError> rows;
    double rmse_km = 0.0;
    bool short_list = false;
};

/// Nearest-mine errors and RMSE for an existing ranking.
BenchmarkReport evaluate_ranking(ReducerKind technique, const std::string& keyword,
                                 const std::vector<RankedCity>& ranked, const std::vector<MineRecord>& mines);

/// score_all -> top_k_cities -> nearest_mine -> rmse.
BenchmarkReport run_benchmark(const std::string& keyword, const EmbeddingTable& table, const ReducerModel& model,
                              const FilteredVocabulary& fvocab, const std::vector<MineRecord>& mines,
                              std::size_t k = 10);

/// `technique,keyword,rank,word,city,admin_name,lat,lng,nearest_mine,error_km`, 4-decimal floats.
std::string format_report_csv(const BenchmarkReport& report);
/// `technique,rmse_km`, one row per report.
std::string format_summary_csv(const std::vector<BenchmarkReport>& reports);
/// FeatureCollection of city points (role=city) and mine points (role=mine).
std::string emit_geojson(const BenchmarkReport& report, const std::vector<MineRecord>& mines);

}  // namespace geoglove
