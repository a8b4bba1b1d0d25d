// Thin numpy-facing wrapper over the core library.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "geoglove/benchmark.hpp"
#include "geoglove/corpus.hpp"
#include "geoglove/pipeline.hpp"
#include "geoglove/ranking.hpp"
#include "geoglove/reducers.hpp"

namespace py = pybind11;
using namespace geoglove;
using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

namespace {

nn::Tensor to_tensor(const Array& a) {
    if (a.ndim() != 2) throw ShapeMismatch("expected a 2-d array");
    const auto r = static_cast<std::size_t>(a.shape(0)), c = static_cast<std::size_t>(a.shape(1));
    return nn::Tensor(r, c, std::vector<double>(a.data(), a.data() + r * c));
}

Array to_array(const nn::Tensor& t) {
    Array out({t.rows(), t.cols()});
    std::copy(t.data().begin(), t.data().end(), out.mutable_data());
    return out;
}

std::vector<double> to_vector(const Array& a) { return {a.data(), a.data() + a.size()}; }

}  // namespace

PYBIND11_MODULE(_geoglove, m) {
    m.doc() = "GloVe embeddings, dimensionality reducers and city ranking";

    // Registered base first: later translators are tried first.
    static py::exception<Error> base(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<ShapeMismatch>(m, "ShapeMismatch", base.ptr());
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
    py::register_exception<ZeroVector>(m, "ZeroVector", base.ptr());
    py::register_exception<NonFiniteValue>(m, "NonFiniteValue", base.ptr());
    py::register_exception<KindMismatch>(m, "KindMismatch", base.ptr());
    py::register_exception<EmptyRows>(m, "EmptyRows", base.ptr());
    py::register_exception<MissingArtifact>(m, "MissingArtifact", base.ptr());
    py::register_exception<UnknownKeyword>(m, "UnknownKeyword", base.ptr());

    m.def("tokenize", [](const std::string& s) { return tokenize(s); });
    m.def("porter_stem", [](const std::string& s) { return porter_stem(s); });

    m.def(
        "haversine_km",
        [](double lat1, double lng1, double lat2, double lng2) {
            return haversine_km(GeoPoint::checked(lat1, lng1), GeoPoint::checked(lat2, lng2));
        },
        py::arg("lat1"), py::arg("lng1"), py::arg("lat2"), py::arg("lng2"));
    m.def("cosine_similarity", [](const Array& u, const Array& v) {
        const auto a = to_vector(u), b = to_vector(v);
        return cosine_similarity(a, b);
    });
    m.def("rmse", [](const std::vector<double>& d) { return rmse(d); });

    m.def("kinds", [] {
        std::vector<std::string> names;
        for (auto k : all_kinds()) names.emplace_back(kind_name(k));
        return names;
    });
    m.def("technique_label", [](const std::string& kind) { return std::string(technique_label(parse_kind(kind))); });

    py::class_<ReducerModel>(m, "ReducerModel")
        .def_property_readonly("kind", [](const ReducerModel& r) { return std::string(kind_name(r.spec.kind)); })
        .def_property_readonly("input_dim", [](const ReducerModel& r) { return r.input_dim; })
        .def_property_readonly("output_dim", &ReducerModel::output_dim)
        .def_readonly("degenerate", &ReducerModel::degenerate)
        .def_property_readonly("param_names",
                               [](const ReducerModel& r) {
                                   std::vector<std::string> n;
                                   for (const auto& p : r.params) n.push_back(p.name);
                                   return n;
                               })
        .def("param", [](const ReducerModel& r, const std::string& name) { return to_array(r.param(name)); })
        .def_property_readonly("trace",
                               [](const ReducerModel& r) {
                                   std::vector<std::tuple<int, double, double, double>> rows;
                                   for (const auto& t : r.trace) rows.emplace_back(t.epoch, t.loss, t.recon, t.kl);
                                   return rows;
                               })
        .def("transform", [](const ReducerModel& r, const Array& x) { return to_array(transform(r, to_tensor(x))); })
        .def("reconstruction_mse",
             [](const ReducerModel& r, const Array& x) { return reconstruction_mse(r, to_tensor(x)); })
        .def("save", [](const ReducerModel& r, const std::filesystem::path& p) { save_model(r, p); });

    m.def(
        "fit_reducer",
        [](const Array& data, const std::string& kind, std::size_t latent_dim, std::vector<std::size_t> hidden_dims,
           int epochs, std::size_t batch_size, double lr, std::uint64_t seed, double kl_weight, std::size_t lstm_steps,
           std::size_t lstm_features, std::size_t lstm_hidden) {
            ReducerSpec s;
            s.kind = parse_kind(kind);
            s.latent_dim = latent_dim;
            s.hidden_dims = std::move(hidden_dims);
            s.epochs = epochs;
            s.batch_size = batch_size;
            s.lr = lr;
            s.seed = seed;
            s.kl_weight = kl_weight;
            s.lstm_steps = lstm_steps;
            s.lstm_features = lstm_features;
            s.lstm_hidden = lstm_hidden;
            const auto t = to_tensor(data);
            py::gil_scoped_release nogil;
            return fit_reducer(t, s);
        },
        py::arg("data"), py::arg("kind"), py::kw_only(), py::arg("latent_dim") = 2,
        py::arg("hidden_dims") = std::vector<std::size_t>{128, 64, 32, 16, 8}, py::arg("epochs") = 200,
        py::arg("batch_size") = 256, py::arg("lr") = 1e-3, py::arg("seed") = 0, py::arg("kl_weight") = 1.0,
        py::arg("lstm_steps") = 25, py::arg("lstm_features") = 8, py::arg("lstm_hidden") = 64);
    m.def(
        "load_model",
        [](const std::filesystem::path& p, std::optional<std::string> kind) {
            std::optional<ReducerKind> k;
            if (kind) k = parse_kind(*kind);
            return load_model(p, k);
        },
        py::arg("path"), py::arg("kind") = py::none());

    // Stage runner: (exit code, stdout text, stderr text), same codes as the CLI.
    m.def(
        "run_stage",
        [](const std::filesystem::path& config, const std::string& stage, bool force,
           std::optional<std::filesystem::path> out_dir) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release nogil;
                code = run_guarded(err, [&] {
                    PipelineConfig cfg = load_config(config);
                    if (out_dir) cfg.output_dir = *out_dir;
                    Pipeline p(cfg, out, err);
                    if (stage == "train") p.train();
                    else if (stage == "reduce") p.reduce();
                    else if (stage == "rank") p.rank();
                    else if (stage == "benchmark") p.benchmark();
                    else if (stage == "all") p.all(force);
                    else throw ConfigError("unknown stage '" + stage + "'");
                    return 0;
                });
            }
            return std::make_tuple(code, out.str(), err.str());
        },
        py::arg("config"), py::arg("stage") = "all", py::arg("force") = false, py::arg("out_dir") = py::none());
}
