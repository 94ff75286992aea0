#include "qhj/cli.hpp"
#include "qhj/errors.hpp"
#include "qhj/pencil.hpp"
#include "qhj/quantization.hpp"
#include "qhj/verify.hpp"
#include "qhj/wavefunction.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

namespace py = pybind11;
using namespace qhj;

namespace {

// Parameter values may be str, int, float or Fraction; their text is parsed exactly.
ParamMap to_params(const py::dict& params) {
    std::map<std::string, std::string> text;
    for (auto [k, v] : params) text[py::str(k)] = py::str(v);
    return cli::parse_params(text);
}

py::object to_python(const cli::Json& doc) { return py::module_::import("json").attr("loads")(cli::dump(doc)); }

PotentialModel model_of(const std::string& name, const py::dict& params) { return get_model(name, to_params(params)); }

Spectrum spectrum_of(const PotentialModel& m, int levels) {
    py::gil_scoped_release release;
    return solve_spectrum(m, levels);
}

}  // namespace

PYBIND11_MODULE(qhj, m) {
    m.doc() = "Quantum Hamilton-Jacobi spectra: residue quantization, coefficient pencils and a finite-difference oracle";
    m.attr("__version__") = "0.1.0";

    // Raised for every library error; .kind carries the error kind name.
    static py::handle error_type = py::exception<Error>(m, "Error", PyExc_RuntimeError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = error_type(e.what());
            inst.attr("kind") = to_string(e.kind());
            PyErr_SetObject(error_type.ptr(), inst.ptr());
        }
    });

    m.def("list_models", [] { return to_python(cli::list_document(all_models())); },
          "Catalog entries with their parameter schemas.");

    m.def(
        "solve",
        [](const std::string& model, const py::dict& params, int levels) {
            auto pm = model_of(model, params);
            return to_python(cli::solve_document(pm, spectrum_of(pm, levels)));
        },
        py::arg("model"), py::arg("params") = py::dict(), py::arg("levels") = 4,
        "Spectrum document: one row per state with energy, residues and wavefunction form.");

    m.def(
        "energies",
        [](const std::string& model, const py::dict& params, int levels) {
            auto pm = model_of(model, params);
            std::vector<cplx> e;
            for (const auto& s : spectrum_of(pm, levels).solutions) e.push_back(s.energy);
            return e;
        },
        py::arg("model"), py::arg("params") = py::dict(), py::arg("levels") = 4, "Sorted energies as complex numbers.");

    m.def(
        "assignments",
        [](const std::string& model, const py::dict& params, int levels) {
            auto pm = model_of(model, params);
            return to_python(cli::assignments_document(pm, enumerate_assignments(pm, std::nullopt, levels)));
        },
        py::arg("model"), py::arg("params") = py::dict(), py::arg("levels") = 4,
        "Every residue assignment with its admissibility verdict.");

    m.def(
        "verify",
        [](const std::string& model, const py::dict& params, double tol, int levels, int points) {
            auto pm = model_of(model, params);
            VerifyReport r;
            {
                py::gil_scoped_release release;
                r = verify_model(pm, {tol, levels, points});
            }
            return to_python(cli::verify_document(r));
        },
        py::arg("model"), py::arg("params") = py::dict(), py::arg("tol") = 0.0, py::arg("levels") = 4,
        py::arg("points") = 0, "Compare every emitted state with the finite-difference oracle.");

    m.def(
        "wavefunction",
        [](const std::string& model, const py::dict& params, long long state, std::optional<std::vector<double>> xs,
           int samples, int levels) {
            auto pm = model_of(model, params);
            auto sp = spectrum_of(pm, levels);
            if (state < 0 || state >= static_cast<long long>(sp.solutions.size()))
                throw Error(ErrorKind::invalid_state, "state " + std::to_string(state) + " out of range");
            const auto& s = sp.solutions[static_cast<std::size_t>(state)];
            if (!xs) xs = cli::sample_grid(pm.sample_interval.first, pm.sample_interval.second, samples);
            auto w = assemble(s.recipe, *xs);
            return to_python(cli::wavefunction_document(pm, s, w.xs, w.values));
        },
        py::arg("model"), py::arg("params") = py::dict(), py::arg("state") = 0, py::arg("xs") = py::none(),
        py::arg("samples") = 200, py::arg("levels") = 4, "Sampled state, sup-normalized, in the CLI JSON layout.");

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line tool in process; returns (exit code, stdout, stderr).");
}
