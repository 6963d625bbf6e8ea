#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nnls/analysis.hpp"
#include "nnls/asymptotics.hpp"
#include "nnls/config.hpp"
#include "nnls/errors.hpp"
#include "nnls/pde.hpp"

namespace py = pybind11;
using namespace nnls;

namespace {

ExperimentConfig make_config(const std::map<std::string, std::string>& settings)
{
    ExperimentConfig cfg;
    for (const auto& [k, v] : settings) apply_setting(cfg, k, v);
    validate(cfg);
    return cfg;
}

py::dict py_scatter(const std::vector<double>& ks, const std::map<std::string, std::string>& settings)
{
    const auto spec = make_spectrum(make_config(settings));
    std::vector<cplx> a1, a2, b;
    {
        py::gil_scoped_release nogil;
        for (double k : ks) {
            const AxisValues v = spec->on_axis(k);
            a1.push_back(v.a1);
            a2.push_back(v.a2);
            b.push_back(v.b);
        }
    }
    py::dict d;
    d["k"] = ks;
    d["a1"] = a1;
    d["a2"] = a2;
    d["b"] = b;
    return d;
}

py::dict py_zeros(const std::map<std::string, std::string>& settings)
{
    const Analysis a = analyse(make_config(settings), false);
    py::dict d;
    d["n"] = a.zeros.n();
    d["p"] = a.zeros.p;
    d["eta"] = a.zeros.eta;
    d["omegas"] = a.omegas.omegas;
    d["assumptions_ok"] = a.report.all_ok();
    d["diagnostics"] = a.report.diagnostics;
    return d;
}

py::list py_predict(const std::vector<double>& xis, double t, const std::map<std::string, std::string>& settings)
{
    const ExperimentConfig cfg = make_config(settings);
    const Analysis a = analyse(cfg, true);
    py::list out;
    for (double xi : xis) {
        py::dict d;
        d["xi"] = xi;
        d["t"] = t;
        try {
            const auto p = predict(xi, t, a.zeros, a.omegas, *a.phase, cfg.guard_fraction);
            d["family"] = family_name(p.sector.family);
            d["m"] = p.sector.m;
            d["nu"] = p.nu;
            d["leading"] = p.leading;
            d["value"] = p.value();
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::TransitionZone) throw;
            d["family"] = "transition";
        }
        out.append(d);
    }
    return out;
}

py::list py_simulate(const std::vector<double>& times, const std::map<std::string, std::string>& settings)
{
    ExperimentConfig cfg = make_config(settings);
    cfg.sim.snapshot_times = times;
    cfg.sim.t_end = times.empty() ? 0.0 : times.back();
    std::vector<FieldSnapshot> snaps;
    {
        py::gil_scoped_release nogil;
        const InitialProfile prof = initial_profile(cfg);
        snaps = nnls::simulate(prof, cfg.sim);
    }
    py::list out;
    for (const auto& s : snaps) {
        std::vector<double> x(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) x[i] = s.x(i);
        py::dict d;
        d["t"] = s.t;
        d["x"] = x;
        d["q"] = s.q;
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Spectral data, long-time asymptotics and direct simulation for the defocusing nonlocal NLS";
    static PyObject* error = PyErr_NewException("nnls_step._core.NnlsError", PyExc_RuntimeError, nullptr);
    m.add_object("NnlsError", py::handle(error));
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::handle(error)(e.what());
            exc.attr("kind") = to_string(e.kind());
            exc.attr("exit_code") = int(e.error_class());
            PyErr_SetObject(error, exc.ptr());
        }
    });

    using Settings = std::map<std::string, std::string>;
    m.def("default_config", &default_config_text, "all config keys with their defaults");
    m.def("scatter", &py_scatter, py::arg("k"), py::arg("settings") = Settings{}, "a1, a2, b on the real axis");
    m.def("zeros", &py_zeros, py::arg("settings") = Settings{}, "zeros of a1, thresholds, assumption report");
    m.def("predict", &py_predict, py::arg("xi"), py::arg("t"), py::arg("settings") = Settings{},
          "sector and asymptotic value along each direction");
    m.def("simulate", &py_simulate, py::arg("times"), py::arg("settings") = Settings{},
          "direct simulation snapshots at the given times");
}
