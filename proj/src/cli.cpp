#include "hjvisc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "hjvisc/graphdist.hpp"
#include "hjvisc/hamiltonian.hpp"
#include "hjvisc/perron.hpp"
#include "hjvisc/pwfn.hpp"
#include "hjvisc/viscosity.hpp"

namespace hjvisc::cli {

using io::InputError;
using io::Json;

const std::vector<std::string>& task_names() {
    static const std::vector<std::string> names{"check-hcont",  "envelope",       "complete",     "distance",
                                                "lattice-sup",  "lattice-inf",    "verify-sub",   "verify-super",
                                                "verify-solution", "verify-envelope", "solve"};
    return names;
}

namespace {

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return s.str();
}

std::string fmt(Interval v) { return v.is_point() ? fmt(v.lo()) : "[" + fmt(v.lo()) + ", " + fmt(v.hi()) + "]"; }

std::string fmt(const Affine& a) {
    if (a.slope == 0.0) return fmt(a.intercept);
    std::string s = a.intercept == 0.0 ? "" : fmt(a.intercept) + (a.slope < 0 ? " - " : " + ");
    const double m = a.intercept == 0.0 ? a.slope : std::abs(a.slope);
    return s + (m == 1.0 ? "" : m == -1.0 ? "-" : fmt(m) + "*") + "x";
}

std::string pass_fail(bool ok) { return ok ? "PASS" : "FAIL"; }

/// Multi-line description of a piecewise function.
std::string describe(const PiecewiseFn& f) {
    std::ostringstream out;
    const auto& xs = f.breakpoints();
    for (std::size_t k = 0; k < f.num_pieces(); ++k) {
        const Piece& p = f.pieces()[k];
        out << "  (" << fmt(xs[k]) << ", " << fmt(xs[k + 1]) << "): ";
        if (p.is_point())
            out << fmt(p.lower) << '\n';
        else
            out << '[' << fmt(p.lower) << ", " << fmt(p.upper) << "]\n";
        if (k + 1 < f.num_pieces()) out << "  at " << fmt(xs[k + 1]) << ": " << fmt(f.nodes()[k]) << '\n';
    }
    return out.str();
}

class Context {
public:
    explicit Context(const Options& opts) : opts_(opts), doc_(opts.doc) {
        if (!doc_.is_object()) throw InputError(opts.source, "problem document must be a JSON object");
        if (auto it = doc_.find("task"); it != doc_.end()) {
            if (!it->is_string()) throw InputError("/task", "expected a string");
            if (it->get<std::string>() != opts.task)
                throw InputError("/task", "document task \"" + it->get<std::string>() +
                                              "\" does not match requested task \"" + opts.task + "\"");
        }
        if (auto it = doc_.find("functions"); it != doc_.end()) {
            if (!it->is_object()) throw InputError("/functions", "expected an object of named functions");
            for (auto f = it->begin(); f != it->end(); ++f) {
                names_.push_back(f.key());
                fns_.push_back(io::pwfn_from_json(f.value(), "/functions/" + f.key()));
            }
        }
        cfg_.tol = number("tol", kDefaultTol);
        cfg_.p_max = number("p_max", cfg_.p_max);
        cfg_.samples = count("samples", cfg_.samples);
        cfg_.extra = count("extra", cfg_.extra);
        cfg_.seed = opts.seed ? *opts.seed : static_cast<std::uint64_t>(count("seed", 0));
        if (!(cfg_.tol >= 0.0)) throw InputError("/tol", "must be nonnegative");
        if (!(cfg_.p_max > 0.0)) throw InputError("/p_max", "must be positive");
        if (cfg_.samples < 2) throw InputError("/samples", "must be at least 2");
    }

    const SampleConfig& sample() const { return cfg_; }
    const Json& doc() const { return doc_; }

    double number(const char* key, double fallback) const {
        auto it = doc_.find(key);
        if (it == doc_.end()) return fallback;
        if (!it->is_number()) throw InputError(std::string("/") + key, "expected a number");
        return it->get<double>();
    }

    std::size_t count(const char* key, std::size_t fallback) const {
        auto it = doc_.find(key);
        if (it == doc_.end()) return fallback;
        if (!it->is_number_unsigned()) throw InputError(std::string("/") + key, "expected a nonnegative integer");
        return it->get<std::size_t>();
    }

    std::string text(const char* key, const std::string& fallback) const {
        auto it = doc_.find(key);
        if (it == doc_.end()) return fallback;
        if (!it->is_string()) throw InputError(std::string("/") + key, "expected a string");
        return it->get<std::string>();
    }

    const PiecewiseFn& fn(const std::string& name, const std::string& where) const {
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) throw InputError(where, "unknown function \"" + name + "\"");
        return fns_[static_cast<std::size_t>(it - names_.begin())];
    }

    /// Function named by `key`, or the only function in the document.
    std::pair<std::string, const PiecewiseFn*> named(const char* key) const {
        auto it = doc_.find(key);
        if (it == doc_.end()) {
            if (fns_.size() == 1) return {names_[0], &fns_[0]};
            throw InputError(std::string("/") + key, "missing (needed unless the document has exactly one function)");
        }
        if (!it->is_string()) throw InputError(std::string("/") + key, "expected a function name");
        const std::string name = it->get<std::string>();
        return {name, &fn(name, std::string("/") + key)};
    }

    /// Names listed under `key`, defaulting to every function in the document.
    std::vector<std::string> family(const char* key, bool default_all) const {
        auto it = doc_.find(key);
        if (it == doc_.end()) {
            if (default_all && !names_.empty()) return names_;
            throw InputError(std::string("/") + key, "missing list of function names");
        }
        if (!it->is_array() || it->empty()) throw InputError(std::string("/") + key, "expected a nonempty array");
        std::vector<std::string> out;
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto& v = (*it)[i];
            const std::string where = std::string("/") + key + "/" + std::to_string(i);
            if (!v.is_string()) throw InputError(where, "expected a function name");
            fn(v.get<std::string>(), where);
            out.push_back(v.get<std::string>());
        }
        return out;
    }

    std::vector<PiecewiseFn> fns(const std::vector<std::string>& names, const char* key) const {
        std::vector<PiecewiseFn> out;
        for (const auto& n : names) out.push_back(fn(n, std::string("/") + key));
        return out;
    }

    Hamiltonian phi(std::string& diagnostics) const {
        std::string src;
        if (opts_.phi) {
            src = *opts_.phi;
        } else {
            auto it = doc_.find("phi");
            if (it == doc_.end()) throw InputError("/phi", "missing Hamiltonian (set \"phi\" or pass --phi)");
            if (!it->is_string()) throw InputError("/phi", "expected an expression string");
            src = it->get<std::string>();
        }
        try {
            Hamiltonian h = Hamiltonian::parse(src);
            if (h.uses_division())
                diagnostics += "warning: phi contains '/'; the equation assumes a jointly continuous Hamiltonian\n";
            return h;
        } catch (const ParseError& e) {
            throw InputError(opts_.phi ? "--phi" : "/phi", e.what());
        }
    }

private:
    const Options& opts_;
    const Json& doc_;
    std::vector<std::string> names_;
    std::vector<PiecewiseFn> fns_;
    SampleConfig cfg_;
};

void summarize(std::ostream& out, const VerificationReport& rep) {
    std::size_t tested = 0;
    for (const auto& s : rep.sites) tested += std::isnan(s.p) && std::isnan(s.x) ? 0 : 1;
    out << "sites checked: " << tested << ", failures: " << rep.failures() << ", tolerance: " << fmt(rep.tolerance)
        << ", seed: " << rep.seed << '\n';
    for (const auto& t : rep.truncations)
        out << "  truncated " << to_string(t.set.kind) << " slope set at x = " << fmt(t.x) << " (" << t.role
            << "): sampled " << t.samples << " slopes within [-" << fmt(t.p_max) << ", " << fmt(t.p_max) << "]\n";
    std::size_t shown = 0;
    for (const auto& s : rep.sites) {
        if (s.pass) continue;
        if (++shown > 10) {
            out << "  ...\n";
            break;
        }
        out << "  failed (" << s.role << ") at x = " << fmt(s.x) << ", u = " << fmt(s.u);
        if (!std::isnan(s.p)) out << ", p = " << fmt(s.p) << ", phi = " << fmt(s.phi);
        else if (!std::isnan(s.phi)) out << ", family value = " << fmt(s.phi);
        out << '\n';
    }
    for (const auto& n : rep.notes) out << "  note: " << n << '\n';
}

struct Artifacts {
    std::vector<io::PlotLayer> layers;
    std::vector<GridFn> iterates;
    std::optional<GridFn> grid;
};

Json function_entry(const std::string& label, const PiecewiseFn& f) {
    return Json{{"name", label}, {"function", io::to_json(f)}};
}

Outcome execute(const Options& opts) {
    Outcome res;
    const Context ctx(opts);
    std::ostringstream out;
    Artifacts art;
    const SampleConfig& cfg = ctx.sample();
    Json& j = res.json;
    j["task"] = opts.task;
    j["seed"] = cfg.seed;

    auto single = [&](const char* key) {
        auto [name, f] = ctx.named(key);
        art.layers.push_back({name, *f});
        out << "function: " << name << '\n';
        j["function"] = name;
        return std::pair<std::string, PiecewiseFn>{name, *f};
    };
    auto result_fn = [&](const std::string& label, const PiecewiseFn& f) {
        art.layers.push_back({label, f});
        j["results"].push_back(function_entry(label, f));
        out << label << ":\n" << describe(f);
    };

    const std::string& task = opts.task;
    out << "task: " << task << '\n';

    if (task == "check-hcont") {
        auto [name, f] = single("target");
        const HContinuity hc = h_continuity(f, cfg.tol);
        j["h_continuity"] = io::to_json(hc);
        out << "S-continuous, F(f) = f: " << pass_fail(hc.s_continuous) << '\n'
            << "upper part equals S(lower part): " << pass_fail(hc.upper_is_envelope_of_lower) << '\n'
            << "lower part equals I(upper part): " << pass_fail(hc.lower_is_envelope_of_upper) << '\n';
        std::vector<std::string> failed;
        if (!hc.s_continuous) failed.push_back("F(f) != f");
        if (!hc.upper_is_envelope_of_lower) failed.push_back("S(lower part) != upper part");
        if (!hc.lower_is_envelope_of_upper) failed.push_back("I(upper part) != lower part");
        out << "H-continuous: " << pass_fail(hc.holds());
        if (!failed.empty()) {
            out << " (";
            for (std::size_t i = 0; i < failed.size(); ++i) out << (i ? "; " : "") << failed[i];
            out << ')';
        }
        out << '\n';
        j["verdict"] = hc.holds();
        res.code = hc.holds() ? kPass : kFail;
    } else if (task == "envelope") {
        auto [name, f] = single("target");
        result_fn("I(" + name + ")", lower_envelope(f));
        result_fn("S(" + name + ")", upper_envelope(f));
    } else if (task == "complete") {
        auto [name, f] = single("target");
        const bool already = is_s_continuous(f, cfg.tol);
        out << "already S-continuous: " << (already ? "yes" : "no") << '\n';
        j["s_continuous"] = already;
        result_fn("F(" + name + ")", graph_completion(f));
    } else if (task == "distance") {
        auto [fname, f] = ctx.named("f");
        auto [gname, g] = ctx.named("g");
        const std::string norm_name = ctx.text("norm", "euclid");
        if (norm_name != "euclid" && norm_name != "max")
            throw InputError("/norm", "expected \"euclid\" or \"max\"");
        const DistanceBounds d =
            hausdorff_bounds(*f, *g, norm_name == "euclid" ? Norm::euclid : Norm::max);
        art.layers.push_back({fname, *f});
        art.layers.push_back({gname, *g});
        out << "f: " << fname << ", g: " << gname << ", norm: " << norm_name << '\n'
            << "Hausdorff distance: " << fmt(d.value) << " (certified upper bound " << fmt(d.upper_bound) << ")\n";
        j["f"] = fname;
        j["g"] = gname;
        j["norm"] = norm_name;
        j["distance"] = d.value;
        j["upper_bound"] = d.upper_bound;
    } else if (task == "lattice-sup" || task == "lattice-inf") {
        const auto names = ctx.family("family", true);
        const auto members = ctx.fns(names, "family");
        for (std::size_t i = 0; i < names.size(); ++i) art.layers.push_back({names[i], members[i]});
        const bool sup = task == "lattice-sup";
        const PiecewiseFn r = sup ? lattice_sup(members, cfg.tol) : lattice_inf(members, cfg.tol);
        std::string label = sup ? "sup{" : "inf{";
        for (std::size_t i = 0; i < names.size(); ++i) label += (i ? ", " : "") + names[i];
        result_fn(label + "}", r);
        j["family"] = names;
        out << "result H-continuous: " << pass_fail(is_h_continuous(r, cfg.tol)) << '\n';
    } else if (task == "verify-sub" || task == "verify-super") {
        const Hamiltonian h = ctx.phi(res.diagnostics);
        auto [name, f] = single("target");
        const bool sub = task == "verify-sub";
        const VerificationReport rep = sub ? verify_subsolution(f, h, cfg) : verify_supersolution(f, h, cfg);
        out << "phi: " << h.to_string() << '\n';
        summarize(out, rep);
        out << (sub ? "subsolution: " : "supersolution: ") << pass_fail(rep.verdict) << '\n';
        j["phi"] = h.to_string();
        j["report"] = io::to_json(rep);
        j["verdict"] = rep.verdict;
        res.code = rep.verdict ? kPass : kFail;
    } else if (task == "verify-solution") {
        const Hamiltonian h = ctx.phi(res.diagnostics);
        auto [name, f] = single("target");
        const VerificationReport rep = verify_interval_solution(f, h, cfg);
        out << "phi: " << h.to_string() << '\n';
        summarize(out, rep);
        out << "interval viscosity solution: " << pass_fail(rep.verdict) << '\n';
        j["phi"] = h.to_string();
        j["report"] = io::to_json(rep);
        j["verdict"] = rep.verdict;
        res.code = rep.verdict ? kPass : kFail;
    } else if (task == "verify-envelope") {
        const Hamiltonian h = ctx.phi(res.diagnostics);
        auto [name, u] = single("candidate");
        const auto z1n = ctx.family("z1", false);
        const auto z2n = ctx.family("z2", false);
        const auto z1 = ctx.fns(z1n, "z1");
        const auto z2 = ctx.fns(z2n, "z2");
        const VerificationReport rep = verify_envelope_solution(u, z1, z2, h, cfg);
        out << "phi: " << h.to_string() << '\n';
        summarize(out, rep);
        out << "envelope viscosity solution: " << pass_fail(rep.verdict) << '\n';
        j["phi"] = h.to_string();
        j["z1"] = z1n;
        j["z2"] = z2n;
        j["report"] = io::to_json(rep);
        j["verdict"] = rep.verdict;
        res.code = rep.verdict ? kPass : kFail;
    } else if (task == "solve") {
        const Hamiltonian h = ctx.phi(res.diagnostics);
        auto load = [&](const std::optional<std::string>& path, const char* key) {
            if (path)
                return std::pair<std::string, PiecewiseFn>{*path, io::pwfn_from_json(io::read_json_file(*path), *path)};
            auto [name, f] = ctx.named(key);
            return std::pair<std::string, PiecewiseFn>{name, *f};
        };
        const auto [lname, u1] = load(opts.lower_path, "lower");
        const auto [uname, u2] = load(opts.upper_path, "upper");
        SolveConfig scfg;
        scfg.sample = cfg;
        scfg.sample.extra = 0;
        scfg.residual_tol = opts.residual_tol ? *opts.residual_tol : ctx.number("residual_tol", scfg.residual_tol);
        scfg.max_iters = opts.max_iters ? *opts.max_iters : ctx.count("max_iters", scfg.max_iters);
        const std::size_t n = opts.nodes ? *opts.nodes : ctx.count("nodes", 101);
        const bool want_iterates = !opts.svg_path.empty() || !opts.trace_path.empty();
        scfg.snapshot_every = ctx.count("snapshot_every", want_iterates ? 500 : 0);
        if (n < 3) throw InputError("/nodes", "need at least 3 nodes");
        if (!(scfg.residual_tol > 0.0)) throw InputError("/residual_tol", "must be positive");
        art.layers.push_back({lname, u1});
        art.layers.push_back({uname, u2});
        out << "phi: " << h.to_string() << '\n'
            << "lower: " << lname << ", upper: " << uname << ", nodes: " << n << ", residual tolerance: "
            << fmt(scfg.residual_tol) << '\n';
        j["phi"] = h.to_string();
        j["nodes"] = n;
        j["residual_tol"] = scfg.residual_tol;

        auto finish = [&](const SolveTrace& t, const GridFn* u) {
            out << "iterations: " << t.iterations << ", bumps: " << t.bumps << ", rejected: " << t.rejected
                << ", sweeps: " << t.sweeps << ", monotone: " << (t.monotone ? "yes" : "no") << '\n'
                << "residuals: sub " << fmt(t.sub_residual) << ", super " << fmt(t.super_residual) << '\n'
                << "termination: " << t.termination << '\n';
            j["termination"] = t.termination;
            j["trace_summary"] = Json{{"iterations", t.iterations}, {"bumps", t.bumps},
                                      {"rejected", t.rejected},     {"sweeps", t.sweeps},
                                      {"monotone", t.monotone},     {"sub_residual", t.sub_residual},
                                      {"super_residual", t.super_residual}};
            res.trace = io::to_json(t, true);
            std::vector<GridFn> iters = t.snapshots;
            if (u && (iters.empty() || !(iters.back() == *u))) iters.push_back(*u);
            art.iterates = std::move(iters);
        };
        try {
            SolveResult r = perron_solve(h, u1, u2, n, scfg);
            finish(r.trace, &r.u);
            j["solution"] = io::to_json(r.u);
            art.grid = r.u;
            out << "solve: converged\n";
        } catch (const NonConvergence& e) {
            finish(e.trace(), nullptr);
            if (!e.trace().snapshots.empty()) art.grid = e.trace().snapshots.back();
            out << "solve: FAIL (" << e.what() << ")\n";
            res.code = kFail;
        }
    }

    res.report = out.str();
    if (art.grid) {
        res.csv = io::grid_csv(*art.grid);
    } else {
        std::vector<io::LabelledGraph> graphs;
        for (const auto& l : art.layers) graphs.push_back({l.label, graph_of(l.f)});
        res.csv = io::graph_csv(graphs);
    }
    res.svg = io::svg_plot(art.layers, art.iterates);
    return res;
}

}  // namespace

Outcome run_to_memory(const Options& opts) {
    if (std::find(task_names().begin(), task_names().end(), opts.task) == task_names().end()) {
        Outcome o;
        o.code = kInputError;
        o.diagnostics = "error: unknown task \"" + opts.task + "\"\n";
        return o;
    }
    try {
        return execute(opts);
    } catch (const InputError& e) {
        Outcome o;
        o.code = kInputError;
        o.diagnostics = std::string("input error: ") + e.what() + '\n';
        return o;
    } catch (const std::invalid_argument& e) {
        Outcome o;
        o.code = kInputError;
        o.diagnostics = std::string("invalid input: ") + e.what() + '\n';
        return o;
    } catch (const std::out_of_range& e) {
        Outcome o;
        o.code = kInputError;
        o.diagnostics = std::string("invalid input: ") + e.what() + '\n';
        return o;
    }
}

int run(const Options& opts, std::ostream& out, std::ostream& err) {
    const Outcome o = run_to_memory(opts);
    out << o.report;
    err << o.diagnostics;
    if (o.code == kInputError) return o.code;
    try {
        if (!opts.out_path.empty()) io::write_text_file(opts.out_path, o.json.dump(2) + "\n");
        if (!opts.csv_path.empty()) io::write_text_file(opts.csv_path, o.csv);
        if (!opts.svg_path.empty()) io::write_text_file(opts.svg_path, o.svg);
        if (!opts.trace_path.empty()) {
            if (o.trace.is_null()) {
                err << "warning: --trace only applies to the solve task\n";
            } else {
                io::write_text_file(opts.trace_path, o.trace.dump(2) + "\n");
            }
        }
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return o.code;
}

}  // namespace hjvisc::cli
