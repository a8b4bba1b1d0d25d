#include "geoglove/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "geoglove/error.hpp"
#include "geoglove/io.hpp"

namespace geoglove {

GeoPoint GeoPoint::checked(double lat, double lng) {
    if (!(lat >= -90.0 && lat <= 90.0)) throw RangeError("latitude " + io::format_shortest(lat) + " out of range");
    if (!(lng >= -180.0 && lng <= 180.0)) throw RangeError("longitude " + io::format_shortest(lng) + " out of range");
    return {lat, lng};
}

double haversine_km(GeoPoint p, GeoPoint q) {
    constexpr double rad = std::numbers::pi / 180.0;
    const double phi1 = p.lat * rad, phi2 = q.lat * rad;
    const double dphi = (q.lat - p.lat) * rad;
    const double dlambda = (q.lng - p.lng) * rad;
    const double s1 = std::sin(dphi / 2.0), s2 = std::sin(dlambda / 2.0);
    double a = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    a = std::clamp(a, 0.0, 1.0);
    const double c = 2.0 * std::atan2(std::sqrt(a), std::sqrt(1.0 - a));
    return kEarthRadiusKm * c;
}

NearestMine nearest_mine(GeoPoint city, const std::vector<MineRecord>& mines) {
    if (mines.empty()) throw EmptyMineSet("no mines to compare against");
    NearestMine best{mines[0], 0, haversine_km(city, {mines[0].lat, mines[0].lng})};
    for (std::size_t i = 1; i < mines.size(); ++i) {
        const double d = haversine_km(city, {mines[i].lat, mines[i].lng});
        if (d < best.distance_km) best = {mines[i], i, d};
    }
    return best;
}

double rmse(std::span<const double> distances) {
    if (distances.empty()) throw EmptyRows("rmse of an empty row set");
    double s = 0.0;
    for (double d : distances) s += d * d;
    return std::sqrt(s / static_cast<double>(distances.size()));
}

double rmse(const std::vector<CityError>& rows) {
    std::vector<double> d;
    d.reserve(rows.size());
    for (const auto& r : rows) d.push_back(r.distance_km);
    return rmse(d);
}

BenchmarkReport evaluate_ranking(ReducerKind technique, const std::string& keyword,
                                 const std::vector<RankedCity>& ranked, const std::vector<MineRecord>& mines) {
    BenchmarkReport rep;
    rep.technique = technique;
    rep.keyword = keyword;
    for (const auto& r : ranked) {
        const NearestMine nm = nearest_mine(GeoPoint::checked(r.city.lat, r.city.lng), mines);
        rep.rows.push_back({r, nm.mine, nm.distance_km});
    }
    rep.rmse_km = rmse(rep.rows);
    return rep;
}

BenchmarkReport run_benchmark(const std::string& keyword, const EmbeddingTable& table, const ReducerModel& model,
                              const FilteredVocabulary& fvocab, const std::vector<MineRecord>& mines, std::size_t k) {
    const ScoreResult scores = score_all(keyword, table, model, fvocab);
    const TopCities top = top_k_cities(scores.scores, fvocab, k);
    BenchmarkReport rep = evaluate_ranking(model.spec.kind, keyword, top.rows, mines);
    rep.short_list = top.short_list;
    return rep;
}

std::string format_report_csv(const BenchmarkReport& report) {
    const std::string tech = io::csv_field(technique_label(report.technique));
    std::string out = "technique,keyword,rank,word,city,admin_name,lat,lng,nearest_mine,error_km\n";
    for (const auto& r : report.rows) {
        out += tech + "," + io::csv_field(report.keyword) + "," + std::to_string(r.ranked.rank) + "," +
               io::csv_field(r.ranked.word) + "," + io::csv_field(r.ranked.city.city) + "," +
               io::csv_field(r.ranked.city.admin_name) + "," + io::format_fixed(r.ranked.city.lat, 4) + "," +
               io::format_fixed(r.ranked.city.lng, 4) + "," + io::csv_field(r.nearest_mine.name) + "," +
               io::format_fixed(r.distance_km, 4) + "\n";
    }
    return out;
}

std::string format_summary_csv(const std::vector<BenchmarkReport>& reports) {
    std::string out = "technique,rmse_km\n";
    for (const auto& r : reports)
        out += io::csv_field(technique_label(r.technique)) + "," + io::format_fixed(r.rmse_km, 4) + "\n";
    return out;
}

std::string emit_geojson(const BenchmarkReport& report, const std::vector<MineRecord>& mines) {
    using nlohmann::json;
    auto point = [](double lat, double lng) { return json{{"type", "Point"}, {"coordinates", {lng, lat}}}; };
    json features = json::array();
    for (const auto& r : report.rows) {
        features.push_back({{"type", "Feature"},
                            {"geometry", point(r.ranked.city.lat, r.ranked.city.lng)},
                            {"properties",
                             {{"role", "city"},
                              {"rank", r.ranked.rank},
                              {"word", r.ranked.word},
                              {"city", r.ranked.city.city},
                              {"admin_name", r.ranked.city.admin_name},
                              {"score", r.ranked.score},
                              {"error_km", r.distance_km},
                              {"nearest_mine", r.nearest_mine.name}}}});
    }
    for (const auto& m : mines) {
        features.push_back({{"type", "Feature"},
                            {"geometry", point(m.lat, m.lng)},
                            {"properties", {{"role", "mine"}, {"name", m.name}, {"commodity", m.commodity}}}});
    }
    json doc = {{"type", "FeatureCollection"},
                {"features", std::move(features)},
                {"metadata",
                 {{"technique", std::string(kind_name(report.technique))},
                  {"keyword", report.keyword},
                  {"homonym_rows", "kept"}}}};
    if (!report.rows.empty()) doc["metadata"]["rmse_km"] = report.rmse_km;
    return doc.dump(2) + "\n";
}

}  // namespace geoglove
