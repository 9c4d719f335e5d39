#include "hjvisc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace hjvisc::io {

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double number_at(const Json& j, const std::string& where) {
    if (!j.is_number()) throw InputError(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw InputError(where, "number is not finite");
    return v;
}

const Json& member(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw InputError(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw InputError(where, std::string("missing \"") + key + "\"");
    return *it;
}

Affine affine_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) throw InputError(where, "expected [intercept, slope]");
    return {number_at(j[0], where + "/0"), number_at(j[1], where + "/1")};
}

Json affine_json(const Affine& a) { return Json::array({a.intercept, a.slope}); }

Json nan_as_null(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        const std::string where = (source.empty() ? "" : source + ": ") + "byte " + std::to_string(e.byte);
        std::string msg = e.what();
        if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
        throw InputError(where, msg);
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open file for writing");
    out << text;
    if (!out) throw std::runtime_error(path + ": write failed");
}

Json to_json(const Interval& v) { return Json::array({v.lo(), v.hi()}); }

Interval interval_from_json(const Json& j, const std::string& where) {
    if (j.is_number()) return {number_at(j, where)};
    if (!j.is_array() || j.size() != 2) throw InputError(where, "expected [lo, hi] or a number");
    const double lo = number_at(j[0], where + "/0");
    const double hi = number_at(j[1], where + "/1");
    if (lo > hi) throw InputError(where, "interval with lo > hi");
    return {lo, hi};
}

Json to_json(const PiecewiseFn& f) {
    Json pieces = Json::array();
    for (const auto& p : f.pieces())
        pieces.push_back(Json{{"lower", affine_json(p.lower)}, {"upper", affine_json(p.upper)}});
    Json nodes = Json::array();
    for (const auto& v : f.nodes()) nodes.push_back(to_json(v));
    return Json{{"domain", Json::array({f.domain_lo(), f.domain_hi()})},
                {"breakpoints", f.breakpoints()},
                {"pieces", pieces},
                {"nodes", nodes}};
}

PiecewiseFn pwfn_from_json(const Json& j, const std::string& where) {
    const Json& dom = member(j, "domain", where);
    if (!dom.is_array() || dom.size() != 2) throw InputError(where + "/domain", "expected [a, b]");
    const double a = number_at(dom[0], where + "/domain/0");
    const double b = number_at(dom[1], where + "/domain/1");
    if (!(a < b)) throw InputError(where + "/domain", "needs a < b");

    std::vector<double> breaks{a};
    if (auto it = j.find("breakpoints"); it != j.end()) {
        if (!it->is_array()) throw InputError(where + "/breakpoints", "expected an array");
        std::vector<double> given;
        for (std::size_t k = 0; k < it->size(); ++k)
            given.push_back(number_at((*it)[k], where + "/breakpoints/" + std::to_string(k)));
        const bool full = !given.empty() && given.front() == a;
        if (full) {
            if (given.size() < 2 || given.back() != b)
                throw InputError(where + "/breakpoints", "a full breakpoint list must end at b");
            breaks = given;
        } else {
            breaks.insert(breaks.end(), given.begin(), given.end());
            breaks.push_back(b);
        }
    } else {
        breaks.push_back(b);
    }
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k)
        if (!(breaks[k] < breaks[k + 1]))
            throw InputError(where + "/breakpoints", "breakpoints must increase strictly inside (a, b)");

    const Json& pj = member(j, "pieces", where);
    if (!pj.is_array() || pj.size() != breaks.size() - 1)
        throw InputError(where + "/pieces", "expected " + std::to_string(breaks.size() - 1) + " pieces");
    std::vector<Piece> pieces;
    for (std::size_t k = 0; k < pj.size(); ++k) {
        const std::string pw = where + "/pieces/" + std::to_string(k);
        const Affine lower = affine_from_json(member(pj[k], "lower", pw), pw + "/lower");
        const auto up = pj[k].find("upper");
        const Affine upper = up == pj[k].end() ? lower : affine_from_json(*up, pw + "/upper");
        pieces.push_back({lower, upper});
    }

    std::vector<Interval> nodes;
    const std::size_t interior = breaks.size() - 2;
    if (auto it = j.find("nodes"); it != j.end()) {
        if (!it->is_array() || it->size() != interior)
            throw InputError(where + "/nodes", "expected " + std::to_string(interior) + " node values");
        for (std::size_t k = 0; k < interior; ++k)
            nodes.push_back(interval_from_json((*it)[k], where + "/nodes/" + std::to_string(k)));
    } else if (interior > 0) {
        throw InputError(where, "missing \"nodes\"");
    }

    try {
        return PiecewiseFn(std::move(breaks), std::move(pieces), std::move(nodes));
    } catch (const std::invalid_argument& e) {
        throw InputError(where, e.what());
    }
}

Json to_json(const SlopeSet& s) {
    Json j{{"kind", to_string(s.kind)}};
    switch (s.kind) {
        case SlopeSet::Kind::empty:
        case SlopeSet::Kind::whole_line: break;
        case SlopeSet::Kind::point:
        case SlopeSet::Kind::interval:
            j["lo"] = s.lo;
            j["hi"] = s.hi;
            break;
        case SlopeSet::Kind::half_line_up: j["lo"] = s.lo; break;
        case SlopeSet::Kind::half_line_down: j["hi"] = s.hi; break;
    }
    return j;
}

Json to_json(const VerificationReport& r) {
    Json sites = Json::array();
    for (const auto& s : r.sites)
        sites.push_back(Json{{"x", nan_as_null(s.x)},
                             {"u", nan_as_null(s.u)},
                             {"p", nan_as_null(s.p)},
                             {"phi", nan_as_null(s.phi)},
                             {"pass", s.pass},
                             {"role", s.role}});
    Json truncs = Json::array();
    for (const auto& t : r.truncations)
        truncs.push_back(Json{{"x", t.x},
                              {"slope_set", to_json(t.set)},
                              {"p_max", t.p_max},
                              {"samples", t.samples},
                              {"role", t.role}});
    return Json{{"verdict", r.verdict}, {"tolerance", r.tolerance}, {"seed", r.seed},
                {"failures", r.failures()}, {"notes", r.notes},        {"truncations", truncs},
                {"sites", sites}};
}

Json to_json(const HContinuity& h) {
    return Json{{"h_continuous", h.holds()},
                {"s_continuous", h.s_continuous},
                {"upper_is_envelope_of_lower", h.upper_is_envelope_of_lower},
                {"lower_is_envelope_of_upper", h.lower_is_envelope_of_upper}};
}

Json to_json(const GridFn& g) {
    Json values = Json::array();
    for (const auto& v : g.values()) values.push_back(to_json(v));
    return Json{{"domain", Json::array({g.lo(), g.hi()})}, {"nodes", g.size()}, {"values", values}};
}

GridFn grid_from_json(const Json& j, const std::string& where) {
    const Json& dom = member(j, "domain", where);
    if (!dom.is_array() || dom.size() != 2) throw InputError(where + "/domain", "expected [a, b]");
    const Json& vals = member(j, "values", where);
    if (!vals.is_array()) throw InputError(where + "/values", "expected an array");
    std::vector<Interval> values;
    for (std::size_t i = 0; i < vals.size(); ++i)
        values.push_back(interval_from_json(vals[i], where + "/values/" + std::to_string(i)));
    try {
        return {number_at(dom[0], where + "/domain/0"), number_at(dom[1], where + "/domain/1"), std::move(values)};
    } catch (const std::invalid_argument& e) {
        throw InputError(where, e.what());
    }
}

Json to_json(const TraceRecord& r) {
    Json j{{"kind", to_string(r.kind)}};
    if (r.kind == TraceRecord::Kind::sweep) {
        j["raised"] = r.raised;
        return j;
    }
    j["node"] = r.node;
    j["x"] = r.x;
    j["phi"] = nan_as_null(r.phi);
    if (r.kind != TraceRecord::Kind::stalled) {
        j["delta"] = r.delta;
        j["radius"] = r.radius;
        j["witness"] = r.witness;
        j["raised"] = r.raised;
        j["checks"] = Json{{"upper_still_subsolution", r.checks.upper_still_subsolution},
                           {"raised_everywhere", r.checks.raised_everywhere},
                           {"changed", r.checks.changed},
                           {"unchanged_outside_ball", r.checks.unchanged_outside_ball},
                           {"lower_capped", r.checks.lower_capped}};
    }
    j["before"] = to_json(r.before);
    j["after"] = to_json(r.after);
    return j;
}

Json to_json(const SolveTrace& t, bool with_snapshots) {
    Json records = Json::array();
    for (const auto& r : t.records) records.push_back(to_json(r));
    Json j{{"termination", t.termination},
           {"iterations", t.iterations},
           {"bumps", t.bumps},
           {"rejected", t.rejected},
           {"sweeps", t.sweeps},
           {"monotone", t.monotone},
           {"sub_residual", t.sub_residual},
           {"super_residual", t.super_residual},
           {"records", records}};
    if (with_snapshots) {
        Json snaps = Json::array();
        for (const auto& g : t.snapshots) snaps.push_back(to_json(g));
        j["snapshots"] = snaps;
    }
    return j;
}

std::string graph_csv(std::span<const LabelledGraph> graphs) {
    std::ostringstream out;
    out << "function,kind,x0,y0,x1,y1,y0_upper,y1_upper\n";
    for (const auto& [label, g] : graphs) {
        for (const auto& s : g.segments)
            out << label << ",segment," << num(s.a.x) << ',' << num(s.a.y) << ',' << num(s.b.x) << ',' << num(s.b.y) << ",,\n";
        for (const auto& b : g.bands)
            out << label << ",band," << num(b.x0) << ',' << num(b.lower(b.x0)) << ',' << num(b.x1) << ',' << num(b.lower(b.x1))
                << ',' << num(b.upper(b.x0)) << ',' << num(b.upper(b.x1)) << '\n';
    }
    return out.str();
}

std::string grid_csv(const GridFn& g) {
    std::ostringstream out;
    out << "x,lower,upper\n";
    for (std::size_t i = 0; i < g.size(); ++i)
        out << num(g.node(i)) << ',' << num(g[i].lo()) << ',' << num(g[i].hi()) << '\n';
    return out.str();
}

std::string function_csv(const PiecewiseFn& f) {
    std::ostringstream out;
    out << "x,lower,upper\n";
    const auto& xs = f.breakpoints();
    auto row = [&](double x, Interval v) { out << num(x) << ',' << num(v.lo()) << ',' << num(v.hi()) << '\n'; };
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        const Piece& p = f.pieces()[k];
        if (k > 0) row(xs[k], f.nodes()[k - 1]);
        row(xs[k], {p.lower(xs[k]), std::max(p.lower(xs[k]), p.upper(xs[k]))});
        const double m = 0.5 * (xs[k] + xs[k + 1]);
        row(m, eval(f, m));
        row(xs[k + 1], {p.lower(xs[k + 1]), std::max(p.lower(xs[k + 1]), p.upper(xs[k + 1]))});
    }
    return out.str();
}

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kMargin = 48.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Frame {
    double x0, x1, y0, y1;
    double sx(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
    double sy(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

std::string pt(const Frame& fr, double x, double y) { return num(fr.sx(x)) + "," + num(fr.sy(y)); }

}  // namespace

std::string svg_plot(std::span<const PlotLayer> layers, std::span<const GridFn> iterates) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    auto grow_y = [&](double y) {
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    };
    for (const auto& layer : layers) {
        const auto& f = layer.f;
        x0 = std::min(x0, f.domain_lo());
        x1 = std::max(x1, f.domain_hi());
        const auto& xs = f.breakpoints();
        for (std::size_t k = 0; k < f.num_pieces(); ++k)
            for (double x : {xs[k], xs[k + 1]}) {
                grow_y(f.pieces()[k].lower(x));
                grow_y(f.pieces()[k].upper(x));
            }
        for (const auto& v : f.nodes()) {
            grow_y(v.lo());
            grow_y(v.hi());
        }
    }
    for (const auto& g : iterates) {
        x0 = std::min(x0, g.lo());
        x1 = std::max(x1, g.hi());
        for (const auto& v : g.values()) {
            grow_y(v.lo());
            grow_y(v.hi());
        }
    }
    if (!std::isfinite(x0)) {
        x0 = 0.0;
        x1 = 1.0;
        y0 = 0.0;
        y1 = 1.0;
    }
    if (y1 - y0 < 1e-12) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pad = 0.06 * (y1 - y0);
    const Frame fr{x0, x1, y0 - pad, y1 + pad};

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
        << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<g stroke=\"#999\" stroke-width=\"1\">\n"
        << "<line x1=\"" << num(kMargin) << "\" y1=\"" << num(kHeight - kMargin) << "\" x2=\"" << num(kWidth - kMargin)
        << "\" y2=\"" << num(kHeight - kMargin) << "\"/>\n"
        << "<line x1=\"" << num(kMargin) << "\" y1=\"" << num(kMargin) << "\" x2=\"" << num(kMargin) << "\" y2=\""
        << num(kHeight - kMargin) << "\"/>\n</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">\n"
        << "<text x=\"" << num(kMargin) << "\" y=\"" << num(kHeight - kMargin + 16) << "\">" << num(x0) << "</text>\n"
        << "<text x=\"" << num(kWidth - kMargin) << "\" y=\"" << num(kHeight - kMargin + 16)
        << "\" text-anchor=\"end\">" << num(x1) << "</text>\n"
        << "<text x=\"" << num(kMargin - 4) << "\" y=\"" << num(fr.sy(y0)) << "\" text-anchor=\"end\">" << num(y0)
        << "</text>\n"
        << "<text x=\"" << num(kMargin - 4) << "\" y=\"" << num(fr.sy(y1)) << "\" text-anchor=\"end\">" << num(y1)
        << "</text>\n</g>\n";

    for (std::size_t li = 0; li < layers.size(); ++li) {
        const auto& f = layers[li].f;
        const char* color = kPalette[li % std::size(kPalette)];
        const auto& xs = f.breakpoints();
        out << "<g class=\"layer\" data-label=\"" << layers[li].label << "\">\n";
        for (std::size_t k = 0; k < f.num_pieces(); ++k) {
            const Piece& p = f.pieces()[k];
            const double a = xs[k], b = xs[k + 1];
            if (!p.is_point())
                out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\""
                    << pt(fr, a, p.lower(a)) << ' ' << pt(fr, b, p.lower(b)) << ' ' << pt(fr, b, p.upper(b)) << ' '
                    << pt(fr, a, p.upper(a)) << "\"/>\n";
            out << "<line stroke=\"" << color << "\" stroke-width=\"2\" x1=\"" << num(fr.sx(a)) << "\" y1=\""
                << num(fr.sy(p.lower(a))) << "\" x2=\"" << num(fr.sx(b)) << "\" y2=\"" << num(fr.sy(p.lower(b)))
                << "\"/>\n";
            if (!p.is_point())
                out << "<line stroke=\"" << color << "\" stroke-width=\"2\" stroke-dasharray=\"6 3\" x1=\""
                    << num(fr.sx(a)) << "\" y1=\"" << num(fr.sy(p.upper(a))) << "\" x2=\"" << num(fr.sx(b))
                    << "\" y2=\"" << num(fr.sy(p.upper(b))) << "\"/>\n";
        }
        for (std::size_t k = 1; k + 1 < xs.size(); ++k) {
            const Interval v = f.nodes()[k - 1];
            const Interval span = hull(v, hull(f.left_limit(k), f.right_limit(k)));
            if (span.width() > 0.0)
                out << "<rect fill=\"" << color << "\" fill-opacity=\"0.35\" stroke=\"" << color << "\" x=\""
                    << num(fr.sx(xs[k]) - 2.5) << "\" y=\"" << num(fr.sy(span.hi())) << "\" width=\"5\" height=\""
                    << num(fr.sy(span.lo()) - fr.sy(span.hi())) << "\"/>\n";
            if (v.width() > 0.0)
                out << "<line stroke=\"" << color << "\" stroke-width=\"3\" x1=\"" << num(fr.sx(xs[k])) << "\" y1=\""
                    << num(fr.sy(v.lo())) << "\" x2=\"" << num(fr.sx(xs[k])) << "\" y2=\"" << num(fr.sy(v.hi()))
                    << "\"/>\n";
            else
                out << "<circle fill=\"" << color << "\" r=\"3\" cx=\"" << num(fr.sx(xs[k])) << "\" cy=\""
                    << num(fr.sy(v.lo())) << "\"/>\n";
        }
        out << "<text font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\" x=\""
            << num(kWidth - kMargin) << "\" y=\"" << num(kMargin - 24 + 14.0 * static_cast<double>(li))
            << "\" text-anchor=\"end\">" << layers[li].label << "</text>\n</g>\n";
    }

    for (std::size_t k = 0; k < iterates.size(); ++k) {
        const auto& g = iterates[k];
        const bool last = k + 1 == iterates.size();
        const double opacity = last ? 1.0 : 0.15 + 0.6 * static_cast<double>(k + 1) / static_cast<double>(iterates.size());
        std::string lo_pts, hi_pts;
        bool proper = false;
        for (std::size_t i = 0; i < g.size(); ++i) {
            lo_pts += pt(fr, g.node(i), g[i].lo()) + ' ';
            hi_pts += pt(fr, g.node(i), g[i].hi()) + ' ';
            proper = proper || !g[i].is_point();
        }
        const char* color = last ? "#000" : "#555";
        out << "<polyline class=\"iterate\" fill=\"none\" stroke=\"" << color << "\" stroke-opacity=\"" << num(opacity)
            << "\" stroke-width=\"" << (last ? "1.5" : "1") << "\" points=\"" << lo_pts << "\"/>\n";
        if (proper)
            out << "<polyline class=\"iterate\" fill=\"none\" stroke=\"" << color << "\" stroke-opacity=\""
                << num(opacity) << "\" stroke-dasharray=\"3 2\" points=\"" << hi_pts << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace hjvisc::io
