// Python bindings. Structured results cross the boundary as JSON-shaped
// Python objects, using the same encoding as the command-line tool.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hjvisc/cli.hpp"
#include "hjvisc/graphdist.hpp"
#include "hjvisc/hamiltonian.hpp"
#include "hjvisc/io.hpp"
#include "hjvisc/perron.hpp"
#include "hjvisc/pwfn.hpp"
#include "hjvisc/viscosity.hpp"

namespace py = pybind11;
using namespace hjvisc;

namespace {

py::object to_py(const io::Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

io::Json from_py(const py::handle& obj) {
    const std::string text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
    return io::parse_json(text, "<python>");
}

Norm norm_from(const std::string& name) {
    if (name == "euclid") return Norm::euclid;
    if (name == "max") return Norm::max;
    throw py::value_error("norm must be 'euclid' or 'max'");
}

SampleConfig sample_config(double tol, double p_max, std::size_t samples, std::size_t extra, std::uint64_t seed) {
    SampleConfig cfg;
    cfg.tol = tol;
    cfg.p_max = p_max;
    cfg.samples = samples;
    cfg.extra = extra;
    cfg.seed = seed;
    return cfg;
}

using Verifier = VerificationReport (*)(const PiecewiseFn&, const Hamiltonian&, const SampleConfig&);

void def_verifier(py::module_& m, const char* name, Verifier fn, const char* doc) {
    m.def(
        name,
        [fn](const PiecewiseFn& f, const std::string& phi, double tol, double p_max, std::size_t samples,
             std::size_t extra, std::uint64_t seed) {
            return to_py(io::to_json(fn(f, Hamiltonian::parse(phi), sample_config(tol, p_max, samples, extra, seed))));
        },
        py::arg("f"), py::arg("phi"), py::kw_only(), py::arg("tol") = kDefaultTol, py::arg("p_max") = 1e3,
        py::arg("samples") = 41, py::arg("extra") = 32, py::arg("seed") = 0, doc);
}

}  // namespace

PYBIND11_MODULE(_hjvisc, m) {
    m.doc() = "Interval-valued viscosity solutions of first-order Hamilton-Jacobi equations on an interval.";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<EvalError>(m, "EvalError", PyExc_ArithmeticError);
    py::register_exception<io::InputError>(m, "InputError", PyExc_ValueError);

    py::class_<PiecewiseFn>(m, "PiecewiseFn")
        .def(py::init([](const py::object& obj) { return io::pwfn_from_json(from_py(obj), ""); }), py::arg("doc"),
             "Build from the JSON-shaped dict used in problem documents.")
        .def_static(
            "constant", [](double a, double b, double lo, double hi) { return PiecewiseFn::constant(a, b, {lo, hi}); },
            py::arg("a"), py::arg("b"), py::arg("lo"), py::arg("hi"))
        .def_static(
            "affine",
            [](double a, double b, double c, double s) { return PiecewiseFn::affine(a, b, Affine{c, s}); },
            py::arg("a"), py::arg("b"), py::arg("intercept"), py::arg("slope"))
        .def_static(
            "polyline",
            [](const std::vector<double>& xs, const std::vector<double>& ys) { return PiecewiseFn::polyline(xs, ys); },
            py::arg("xs"), py::arg("ys"))
        .def_static(
            "step",
            [](double a, double b, double at, double left, double right, std::pair<double, double> node) {
                return PiecewiseFn::step(a, b, at, left, right, {node.first, node.second});
            },
            py::arg("a"), py::arg("b"), py::arg("at"), py::arg("left"), py::arg("right"), py::arg("node"))
        .def("to_dict", [](const PiecewiseFn& f) { return to_py(io::to_json(f)); })
        .def("__call__",
             [](const PiecewiseFn& f, double x) {
                 const Interval v = eval(f, x);
                 return std::make_pair(v.lo(), v.hi());
             })
        .def_property_readonly("breakpoints", [](const PiecewiseFn& f) { return f.breakpoints(); })
        .def_property_readonly("is_point_valued", &PiecewiseFn::is_point_valued)
        .def("__eq__", [](const PiecewiseFn& a, const PiecewiseFn& b) { return a == b; })
        .def("__repr__", [](const PiecewiseFn& f) { return "PiecewiseFn(" + io::to_json(f).dump() + ")"; });

    m.def("lower_envelope", &lower_envelope);
    m.def("upper_envelope", &upper_envelope);
    m.def("graph_completion", &graph_completion);
    m.def("lower_part", &lower_part);
    m.def("upper_part", &upper_part);
    m.def("is_s_continuous", &is_s_continuous, py::arg("f"), py::arg("tol") = kDefaultTol);
    m.def("is_h_continuous", &is_h_continuous, py::arg("f"), py::arg("tol") = kDefaultTol);
    m.def("leq", &leq, py::arg("f"), py::arg("g"), py::arg("tol") = kDefaultTol);
    m.def("equal", &equal, py::arg("f"), py::arg("g"), py::arg("tol") = kDefaultTol);
    m.def(
        "lattice_sup", [](const std::vector<PiecewiseFn>& fs, double tol) { return lattice_sup(fs, tol); },
        py::arg("fs"), py::arg("tol") = kDefaultTol);
    m.def(
        "lattice_inf", [](const std::vector<PiecewiseFn>& fs, double tol) { return lattice_inf(fs, tol); },
        py::arg("fs"), py::arg("tol") = kDefaultTol);
    m.def(
        "hausdorff_distance",
        [](const PiecewiseFn& f, const PiecewiseFn& g, const std::string& norm) {
            const DistanceBounds d = hausdorff_bounds(f, g, norm_from(norm));
            return std::make_pair(d.value, d.upper_bound);
        },
        py::arg("f"), py::arg("g"), py::arg("norm") = "euclid",
        "Returns (attained value, certified upper bound).");

    m.def(
        "evaluate", [](const std::string& phi, double x, double u, double p) { return Hamiltonian::parse(phi)(x, u, p); },
        py::arg("phi"), py::arg("x"), py::arg("u"), py::arg("p"));
    m.def(
        "canonical", [](const std::string& phi) { return Hamiltonian::parse(phi).to_string(); }, py::arg("phi"));

    def_verifier(m, "verify_subsolution", &verify_subsolution, "Report for a point-valued u.s.c. function.");
    def_verifier(m, "verify_supersolution", &verify_supersolution, "Report for a point-valued l.s.c. function.");
    def_verifier(m, "verify_interval_solution", &verify_interval_solution, "Report for an S-continuous function.");

    m.def(
        "solve",
        [](const std::string& phi, const PiecewiseFn& u1, const PiecewiseFn& u2, std::size_t nodes,
           std::size_t max_iters, double residual_tol) {
            SolveConfig cfg;
            cfg.max_iters = max_iters;
            cfg.residual_tol = residual_tol;
            py::dict out;
            try {
                const SolveResult r = perron_solve(Hamiltonian::parse(phi), u1, u2, nodes, cfg);
                out["u"] = to_py(io::to_json(r.u));
                out["trace"] = to_py(io::to_json(r.trace, false));
            } catch (const NonConvergence& e) {
                out["u"] = py::none();
                out["trace"] = to_py(io::to_json(e.trace(), false));
            }
            return out;
        },
        py::arg("phi"), py::arg("u1"), py::arg("u2"), py::arg("nodes") = 201, py::kw_only(),
        py::arg("max_iters") = 200000, py::arg("residual_tol") = kDefaultTol,
        "Grid solution between u1 and u2; 'u' is None when the solver did not converge.");

    m.def(
        "run",
        [](const std::string& task, const py::object& doc, std::optional<std::uint64_t> seed) {
            cli::Options opts;
            opts.task = task;
            opts.doc = from_py(doc);
            opts.seed = seed;
            const cli::Outcome o = cli::run_to_memory(opts);
            py::dict out;
            out["code"] = o.code;
            out["report"] = o.report;
            out["diagnostics"] = o.diagnostics;
            out["result"] = to_py(o.json);
            out["csv"] = o.csv;
            out["svg"] = o.svg;
            return out;
        },
        py::arg("task"), py::arg("doc"), py::arg("seed") = py::none(),
        "Run a batch task on a problem document, as the command-line tool does.");
}
