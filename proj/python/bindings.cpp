// Python bindings for the switchcrn core. Structured results cross as JSON text and are
// decoded on the Python side.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "switchcrn/classify.hpp"
#include "switchcrn/cli.hpp"
#include "switchcrn/drift.hpp"
#include "switchcrn/gallery.hpp"
#include "switchcrn/json_io.hpp"
#include "switchcrn/metzler.hpp"
#include "switchcrn/mixing.hpp"
#include "switchcrn/sim.hpp"

namespace py = pybind11;
using namespace switchcrn;

namespace {

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw std::invalid_argument("ragged matrix");
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<std::vector<double>> from_matrix(const Matrix& m) {
    std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

SimConfig make_config(const SwitchedModel& m, double kappa, const std::vector<std::int64_t>& x0, std::size_t env,
                      double t_max, std::int64_t escape_norm, std::uint64_t seed, const std::string& method) {
    SimConfig c;
    c.kappa = kappa;
    c.x0 = x0.empty() ? State(m.n_species(), 1) : State(x0.begin(), x0.end());
    c.i0 = env;
    c.t_max = t_max;
    c.escape_norm = escape_norm;
    c.seed = seed;
    c.method = parse_sim_method(method);
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Stability analysis and simulation of reaction networks in switching environments";

    py::register_exception<ModelError>(mod, "ModelError", PyExc_ValueError);

    py::class_<SwitchedModel>(mod, "Model")
        .def_static("from_text", &parse_model, py::arg("text"))
        .def_static("from_json", &model_from_json_text, py::arg("text"))
        .def_static("from_file", &load_model_file, py::arg("path"))
        .def_static(
            "gallery", [](const std::string& id, const Params& p) { return build(id, p); }, py::arg("id"),
            py::arg("params") = Params{})
        .def_property_readonly("species", &SwitchedModel::species)
        .def_property_readonly("n_env", &SwitchedModel::n_env)
        .def_property_readonly("q", [](const SwitchedModel& m) { return from_matrix(m.q()); })
        .def("to_text", &emit_model)
        .def("to_json", [](const SwitchedModel& m) { return model_to_json(m).dump(); })
        .def("analysis_json", [](const SwitchedModel& m) { return analysis_to_json(m).dump(); })
        .def("__eq__", [](const SwitchedModel& a, const SwitchedModel& b) { return a == b; })
        .def("__repr__", [](const SwitchedModel& m) {
            return "<Model species=" + std::to_string(m.n_species()) + " environments=" + std::to_string(m.n_env()) + ">";
        });

    mod.def("gallery_ids", [] {
        std::vector<std::string> ids;
        for (const auto& e : gallery_entries()) ids.push_back(e.id);
        return ids;
    });
    mod.def("classify_json", [](const SwitchedModel& m) { return to_json(classify(m), m.species()).dump(); });
    mod.def("spectral_abscissa", [](const std::vector<std::vector<double>>& a) { return spectral_abscissa(to_matrix(a)); });
    mod.def("stationary_distribution",
            [](const std::vector<std::vector<double>>& q) { return stationary_distribution(to_matrix(q)); });
    mod.def("mixed_matrix", [](const SwitchedModel& m) { return from_matrix(mix(m).mixed_matrix); });
    mod.def(
        "generator",
        [](const SwitchedModel& m, double kappa, const std::vector<std::vector<double>>& coeffs,
           const std::vector<std::int64_t>& x, std::size_t env) {
            return generator_apply(m, kappa, LyapunovFn::linear(coeffs), State(x.begin(), x.end()), env);
        },
        py::arg("model"), py::arg("kappa"), py::arg("coeffs"), py::arg("state"), py::arg("env"),
        "Exact generator of the linear function x -> coeffs[env] . x at (state, env).");
    mod.def(
        "simulate",
        [](const SwitchedModel& m, double kappa, const std::vector<std::int64_t>& x0, std::size_t env, double t_max,
           std::int64_t escape_norm, std::uint64_t seed, const std::string& method) {
            Trajectory t;
            {
                py::gil_scoped_release release;
                t = simulate(m, make_config(m, kappa, x0, env, t_max, escape_norm, seed, method));
            }
            py::dict d;
            d["termination"] = to_string(t.end);
            d["t_end"] = t.t_end;
            d["final_state"] = std::vector<std::int64_t>(t.final_state.begin(), t.final_state.end());
            d["final_env"] = t.final_env;
            d["n_events"] = t.n_events;
            return d;
        },
        py::arg("model"), py::arg("kappa"), py::arg("x0") = std::vector<std::int64_t>{}, py::arg("env") = 0,
        py::arg("t_max") = 1e3, py::arg("escape_norm") = 1000, py::arg("seed") = 0, py::arg("method") = "direct");
    mod.def(
        "sweep",
        [](const SwitchedModel& m, const std::vector<double>& kappas, std::size_t n_traj,
           const std::vector<std::int64_t>& x0, double t_max, std::int64_t escape_norm, std::uint64_t seed,
           const std::string& method, std::size_t threads) {
            SweepResult r;
            {
                py::gil_scoped_release release;
                r = sweep_kappa(m, kappas, make_config(m, 1.0, x0, 0, t_max, escape_norm, seed, method), n_traj,
                                threads);
            }
            py::list rows;
            for (const auto& row : r.rows) {
                py::dict d;
                d["kappa"] = row.kappa;
                d["escape_fraction"] = row.stats.fraction;
                d["wilson_low"] = row.stats.wilson_low;
                d["wilson_high"] = row.stats.wilson_high;
                d["n_traj"] = row.stats.n_traj;
                d["n_event_capped"] = row.stats.n_event_capped;
                rows.append(d);
            }
            return rows;
        },
        py::arg("model"), py::arg("kappas"), py::arg("n_traj") = 200, py::arg("x0") = std::vector<std::int64_t>{},
        py::arg("t_max") = 1e3, py::arg("escape_norm") = 1000, py::arg("seed") = 0, py::arg("method") = "direct",
        py::arg("threads") = 1);
    mod.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
