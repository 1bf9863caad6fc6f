#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "drlab/analysis.hpp"
#include "drlab/cli.hpp"
#include "drlab/io.hpp"
#include "drlab/pathcalc.hpp"
#include "drlab/presets.hpp"
#include "drlab/treesim.hpp"

namespace py = pybind11;
using namespace drlab;

namespace {

// Results travel as JSON text and come out as plain Python objects.
py::object to_py(const io::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

// A spec is a preset name or a JSON string in the spec-file format.
SystemSpec resolve(const std::string& spec, const std::string& mode) {
    SystemSpec s = (!spec.empty() && spec.front() == '{') ? io::spec_from_json(io::json::parse(spec)) : preset(spec);
    if (!mode.empty() && parse_mode(mode) != s.mode) s = make_spec(s.m, s.initial, parse_mode(mode), s.label);
    return s;
}

template <class F>
auto with_mode(Mode mode, F&& f) {
    switch (mode) {
    case Mode::Float: return f(double{});
    case Mode::Rational: return f(Rational{});
    default: return f(Residue{});
    }
}

} // namespace

PYBIND11_MODULE(_drlab, mod) {
    mod.doc() = "Derrida-Retaux recursive system: exact evolution, identities and simulation";

    py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(mod, "DomainError", PyExc_ValueError);
    py::register_exception<ResourceError>(mod, "ResourceError", PyExc_RuntimeError);

    mod.def("presets", &preset_names);

    mod.def(
        "phase", [](const std::string& spec, const std::string& mode) {
            return to_py(io::phase_to_json(classify_phase(resolve(spec, mode))));
        },
        py::arg("spec"), py::arg("mode") = "");

    mod.def(
        "evolve_csv", [](const std::string& spec, long steps, const std::string& mode) {
            const auto s = resolve(spec, mode);
            std::ostringstream os;
            py::gil_scoped_release release;
            with_mode(s.mode, [&](auto tag) {
                io::write_trace_csv(os, evolve<decltype(tag)>(s, steps));
                return 0;
            });
            return os.str();
        },
        py::arg("spec"), py::arg("steps"), py::arg("mode") = "float");

    mod.def(
        "verify_pivotal", [](const std::string& spec, long steps, long ell_max, const std::string& mode) {
            const auto s = resolve(spec, mode);
            return to_py(with_mode(s.mode, [&](auto tag) {
                const auto ctx = make_context<decltype(tag)>(s, steps, ell_max + 1);
                return io::residual_to_json(check_pivotal_identity(ctx, steps, ell_max));
            }));
        },
        py::arg("spec"), py::arg("steps"), py::arg("ell_max") = 10, py::arg("mode") = "modular");

    mod.def(
        "verify_openpath", [](const std::string& spec, long steps, std::vector<long> is, long ell_max,
                              const std::string& mode) {
            const auto s = resolve(spec, mode);
            return to_py(with_mode(s.mode, [&](auto tag) {
                const auto ctx = make_context<decltype(tag)>(s, steps, ell_max + 1);
                return io::openpath_to_json(check_openpath_identities(ctx, is, steps, ell_max));
            }));
        },
        py::arg("spec"), py::arg("steps"), py::arg("is") = std::vector<long>{0, 2}, py::arg("ell_max") = 10,
        py::arg("mode") = "modular");

    mod.def(
        "fixture_counts", []() {
            const auto t = figure_fixture();
            const auto c = count_open_paths(t);
            py::dict d;
            for (const auto& [i, v] : c.by_value) d[py::int_(i)] = v;
            return py::make_tuple(d, c.total, t.root());
        });

    mod.def(
        "simulate", [](const std::string& spec, long n, long reps, std::uint64_t seed, int threads) {
            const auto s = resolve(spec, "");
            std::vector<McEstimate> est;
            {
                py::gil_scoped_release release;
                est = monte_carlo(s, n, McSelector{}, reps, seed, threads);
            }
            py::list out;
            for (const auto& e : est) {
                py::dict d;
                d["statistic"] = e.statistic;
                d["estimate"] = e.estimate;
                d["stderr"] = e.stderr_;
                out.append(d);
            }
            return out;
        },
        py::arg("spec"), py::arg("n"), py::arg("reps"), py::arg("seed") = 1, py::arg("threads") = 1);

    mod.def(
        "fit_exponent", [](std::vector<long> n, std::vector<double> v, long lo, long hi) {
            if (n.size() != v.size()) throw ConfigError("n and values differ in length");
            return to_py(io::fit_to_json(fit_exponent(Series{std::move(n), std::move(v)}, lo, hi), "series"));
        },
        py::arg("n"), py::arg("values"), py::arg("lo"), py::arg("hi"));

    mod.def(
        "run_cli", [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = run_cli(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));

    mod.attr("__version__") = kToolVersion;
}
