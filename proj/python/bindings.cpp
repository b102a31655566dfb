#include "prefopt/bench.hpp"
#include "prefopt/codec.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace prefopt;

namespace {

EngineConfig config_from(const std::string& text) { return config_from_json(Json::parse(text.empty() ? "{}" : text)); }

Session create_box(const Vector& lower, const Vector& upper, const std::string& config,
                   const std::optional<Matrix>& A, const std::optional<Vector>& b) {
    Problem p;
    p.bounds = {lower, upper};
    if (A.has_value() != b.has_value()) throw ConfigError("A and b must be given together");
    if (A) p.constraints.linear = LinearConstraints{*A, *b};
    return Session::create(p, config_from(config));
}

}  // namespace

PYBIND11_MODULE(_prefopt, m) {
    m.doc() = "Preference-based global optimization core";

    // Translators run most-recent first, so the base class goes first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<StateError>(m, "StateError", PyExc_RuntimeError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InvalidValueError>(m, "InvalidValueError", PyExc_ValueError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);

    py::class_<Session>(m, "Session")
        .def_static("create", &create_box, py::arg("lower"), py::arg("upper"), py::arg("config") = "{}",
                    py::arg("A") = std::nullopt, py::arg("b") = std::nullopt)
        .def_static(
            "create_named",
            [](const std::string& name, const std::string& config) { return make_session(latent_suite(name), config_from(config)); },
            py::arg("name"), py::arg("config") = "{}")
        .def_static(
            "from_json", [](const std::string& doc) { return load_session(Json::parse(doc)); }, py::arg("document"))
        .def("to_json", [](const Session& s) { return SessionCodec::encode(s).dump(); })
        .def("ask_json", [](Session& s) { return to_json(s.ask()).dump(); })
        .def(
            "tell", [](Session& s, int outcome) { s.tell(preference_from_int(outcome)); }, py::arg("outcome"))
        .def(
            "run_auto",
            [](Session& s, const std::function<int(const Vector&, const Vector&)>& oracle) {
                std::vector<std::pair<std::size_t, std::size_t>> out;
                for (const auto& t : run_auto(s, [&](const Vector& a, const Vector& b) {
                         return preference_from_int(oracle(a, b));
                     })) {
                    out.emplace_back(t.query_count, t.best_index);
                }
                return out;
            },
            py::arg("oracle"))
        .def("best", &Session::best)
        .def("sample", &Session::sample, py::arg("index"))
        .def_property_readonly("best_index", &Session::best_index)
        .def_property_readonly("num_samples", &Session::num_samples)
        .def_property_readonly("queries_done", &Session::queries_done)
        .def_property_readonly("queries_remaining", &Session::queries_remaining)
        .def_property_readonly("epsilon", &Session::epsilon)
        .def_property_readonly("phase", [](const Session& s) { return to_string(s.phase()); })
        .def_property_readonly("best_trace", &Session::best_trace);

    m.def("latent_names", &latent_names);
    m.def(
        "latent_value", [](const std::string& name, const Vector& x) { return latent_suite(name).f(x); },
        py::arg("name"), py::arg("x"));
    m.def(
        "latent_bounds",
        [](const std::string& name) {
            const auto p = latent_suite(name);
            return std::make_pair(p.problem.bounds.lower, p.problem.bounds.upper);
        },
        py::arg("name"));
    m.def(
        "run_benchmark_json",
        [](const std::string& name, const std::string& config, const std::vector<std::uint64_t>& seeds, double noise,
           std::size_t threads) {
            BenchmarkReport r;
            {
                py::gil_scoped_release release;
                r = run_benchmark(latent_suite(name), config_from(config), seeds, {noise, threads});
            }
            Json runs = Json::array();
            for (const auto& run : r.runs) {
                runs.push_back({{"seed", run.seed}, {"ok", run.ok}, {"error", run.error}, {"best_values", run.best_values}});
            }
            return Json{{"problem", r.problem}, {"median", r.median}, {"min", r.min}, {"max", r.max}, {"runs", runs}}.dump();
        },
        py::arg("name"), py::arg("config") = "{}", py::arg("seeds"), py::arg("noise") = 0.0, py::arg("threads") = 1);
}
