#include "hjvisc/pwfn.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hjvisc {

namespace {

void require_same_domain(const PiecewiseFn& f, const PiecewiseFn& g) {
    if (!f.same_domain(g))
        throw std::invalid_argument("domain mismatch: (" + std::to_string(f.domain_lo()) + ", " +
                                    std::to_string(f.domain_hi()) + ") vs (" +
                                    std::to_string(g.domain_lo()) + ", " +
                                    std::to_string(g.domain_hi()) + ")");
}

// Interval from two values that should satisfy lo <= hi up to rounding.
Interval ordered(double lo, double hi) { return {lo, std::max(lo, hi)}; }

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

PiecewiseFn::PiecewiseFn(std::vector<double> breakpoints, std::vector<Piece> pieces,
                         std::vector<Interval> nodes)
    : breaks_(std::move(breakpoints)), pieces_(std::move(pieces)), nodes_(std::move(nodes)) {
    if (breaks_.size() < 2)
        throw std::invalid_argument("piecewise function needs at least the two domain sentinels");
    if (pieces_.size() != breaks_.size() - 1)
        throw std::invalid_argument("expected " + std::to_string(breaks_.size() - 1) +
                                    " pieces, got " + std::to_string(pieces_.size()));
    if (nodes_.size() != breaks_.size() - 2)
        throw std::invalid_argument("expected " + std::to_string(breaks_.size() - 2) +
                                    " node values, got " + std::to_string(nodes_.size()));
    for (std::size_t k = 0; k < breaks_.size(); ++k) {
        if (!std::isfinite(breaks_[k])) throw std::invalid_argument("breakpoints must be finite");
        if (k > 0 && !(breaks_[k - 1] < breaks_[k]))
            throw std::invalid_argument("breakpoints must be strictly increasing");
    }
    for (std::size_t j = 0; j < pieces_.size(); ++j) {
        const auto& pc = pieces_[j];
        for (double x : {breaks_[j], breaks_[j + 1]}) {
            if (!std::isfinite(pc.lower(x)) || !std::isfinite(pc.upper(x)))
                throw std::invalid_argument("piece " + std::to_string(j) + " is not finite");
            if (pc.lower(x) > pc.upper(x) + kDefaultTol)
                throw std::invalid_argument("piece " + std::to_string(j) +
                                            ": lower bound exceeds upper bound at x = " +
                                            std::to_string(x));
        }
    }
}

PiecewiseFn PiecewiseFn::constant(double a, double b, Interval value) {
    return {{a, b}, {Piece{{value.lo(), 0.0}, {value.hi(), 0.0}}}, {}};
}

PiecewiseFn PiecewiseFn::affine(double a, double b, Affine lower, Affine upper) {
    return {{a, b}, {Piece{lower, upper}}, {}};
}

PiecewiseFn PiecewiseFn::polyline(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("polyline needs matching vertex lists of length >= 2");
    std::vector<Piece> pieces;
    std::vector<Interval> nodes;
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
        const double slope = (ys[j + 1] - ys[j]) / (xs[j + 1] - xs[j]);
        const Affine line{ys[j] - slope * xs[j], slope};
        pieces.push_back({line, line});
        if (j > 0) nodes.emplace_back(ys[j]);
    }
    return {std::vector<double>(xs.begin(), xs.end()), std::move(pieces), std::move(nodes)};
}

PiecewiseFn PiecewiseFn::step(double a, double b, double at, double left, double right,
                              Interval node) {
    const Affine l{left, 0.0};
    const Affine r{right, 0.0};
    return {{a, at, b}, {Piece{l, l}, Piece{r, r}}, {node}};
}

Interval PiecewiseFn::left_limit(std::size_t k) const {
    const Piece& pc = pieces_.at(k - 1);
    return ordered(pc.lower(breaks_[k]), pc.upper(breaks_[k]));
}

Interval PiecewiseFn::right_limit(std::size_t k) const {
    const Piece& pc = pieces_.at(k);
    return ordered(pc.lower(breaks_[k]), pc.upper(breaks_[k]));
}

Interval PiecewiseFn::limit_at_lo() const {
    return ordered(pieces_.front().lower(domain_lo()), pieces_.front().upper(domain_lo()));
}

Interval PiecewiseFn::limit_at_hi() const {
    return ordered(pieces_.back().lower(domain_hi()), pieces_.back().upper(domain_hi()));
}

std::pair<std::size_t, bool> PiecewiseFn::locate(double x) const {
    auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
    const auto k = static_cast<std::size_t>(it - breaks_.begin());
    if (it != breaks_.end() && *it == x) return {k, true};
    return {k - 1, false};
}

bool PiecewiseFn::is_point_valued() const {
    return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.is_point(); }) &&
           std::all_of(nodes_.begin(), nodes_.end(), [](const Interval& v) { return v.is_point(); });
}

Interval eval(const PiecewiseFn& f, double x) {
    if (!f.contains_point(x))
        throw std::out_of_range("x = " + std::to_string(x) + " outside the open domain (" +
                                std::to_string(f.domain_lo()) + ", " +
                                std::to_string(f.domain_hi()) + ")");
    auto [k, at_break] = f.locate(x);
    if (at_break) return f.nodes()[k - 1];
    const Piece& pc = f.pieces()[k];
    return ordered(pc.lower(x), pc.upper(x));
}

PiecewiseFn lower_envelope(const PiecewiseFn& f) {
    std::vector<Piece> pieces;
    pieces.reserve(f.num_pieces());
    for (const auto& pc : f.pieces()) pieces.push_back({pc.lower, pc.lower});
    std::vector<Interval> nodes;
    for (std::size_t k = 1; k + 1 < f.breakpoints().size(); ++k) {
        const double v = std::min({f.nodes()[k - 1].lo(), f.left_limit(k).lo(), f.right_limit(k).lo()});
        nodes.emplace_back(v);
    }
    return {f.breakpoints(), std::move(pieces), std::move(nodes)};
}

PiecewiseFn upper_envelope(const PiecewiseFn& f) {
    std::vector<Piece> pieces;
    pieces.reserve(f.num_pieces());
    for (const auto& pc : f.pieces()) pieces.push_back({pc.upper, pc.upper});
    std::vector<Interval> nodes;
    for (std::size_t k = 1; k + 1 < f.breakpoints().size(); ++k) {
        const double v = std::max({f.nodes()[k - 1].hi(), f.left_limit(k).hi(), f.right_limit(k).hi()});
        nodes.emplace_back(v);
    }
    return {f.breakpoints(), std::move(pieces), std::move(nodes)};
}

PiecewiseFn combine(const PiecewiseFn& lower, const PiecewiseFn& upper, double tol) {
    require_same_domain(lower, upper);
    const auto xs = merged_breakpoints(lower, upper);
    const auto lo = refine(lower, xs);
    const auto hi = refine(upper, xs);
    std::vector<Piece> pieces;
    for (std::size_t j = 0; j < lo.num_pieces(); ++j)
        pieces.push_back({lo.pieces()[j].lower, hi.pieces()[j].upper});
    std::vector<Interval> nodes;
    for (std::size_t k = 0; k < lo.nodes().size(); ++k) {
        const double l = lo.nodes()[k].lo();
        const double u = hi.nodes()[k].hi();
        if (l > u + tol)
            throw std::invalid_argument("combine: lower exceeds upper at x = " +
                                        std::to_string(xs[k + 1]));
        nodes.push_back(ordered(l, u));
    }
    return {xs, std::move(pieces), std::move(nodes)};
}

PiecewiseFn graph_completion(const PiecewiseFn& f) {
    return combine(lower_envelope(f), upper_envelope(f));
}

PiecewiseFn lower_part(const PiecewiseFn& f) {
    std::vector<Piece> pieces;
    for (const auto& pc : f.pieces()) pieces.push_back({pc.lower, pc.lower});
    std::vector<Interval> nodes;
    for (const auto& v : f.nodes()) nodes.emplace_back(v.lo());
    return {f.breakpoints(), std::move(pieces), std::move(nodes)};
}

PiecewiseFn upper_part(const PiecewiseFn& f) {
    std::vector<Piece> pieces;
    for (const auto& pc : f.pieces()) pieces.push_back({pc.upper, pc.upper});
    std::vector<Interval> nodes;
    for (const auto& v : f.nodes()) nodes.emplace_back(v.hi());
    return {f.breakpoints(), std::move(pieces), std::move(nodes)};
}

bool is_s_continuous(const PiecewiseFn& f, double tol) {
    return equal(graph_completion(f), f, tol);
}

HContinuity h_continuity(const PiecewiseFn& f, double tol) {
    const auto lo = lower_part(f);
    const auto hi = upper_part(f);
    HContinuity r;
    r.s_continuous = is_s_continuous(f, tol);
    r.upper_is_envelope_of_lower = equal(upper_envelope(lo), hi, tol);
    r.lower_is_envelope_of_upper = equal(lower_envelope(hi), lo, tol);
    return r;
}

bool is_h_continuous(const PiecewiseFn& f, double tol) { return h_continuity(f, tol).holds(); }

PiecewiseFn width_fn(const PiecewiseFn& f) {
    std::vector<Piece> pieces;
    for (const auto& pc : f.pieces()) {
        const Affine w{pc.upper.intercept - pc.lower.intercept, pc.upper.slope - pc.lower.slope};
        pieces.push_back({w, w});
    }
    std::vector<Interval> nodes;
    for (const auto& v : f.nodes()) nodes.emplace_back(v.width());
    return {f.breakpoints(), std::move(pieces), std::move(nodes)};
}

std::vector<double> merged_breakpoints(const PiecewiseFn& f, const PiecewiseFn& g) {
    require_same_domain(f, g);
    std::vector<double> xs;
    std::set_union(f.breakpoints().begin(), f.breakpoints().end(), g.breakpoints().begin(),
                   g.breakpoints().end(), std::back_inserter(xs));
    return xs;
}

PiecewiseFn refine(const PiecewiseFn& f, std::span<const double> extra) {
    std::vector<double> xs(f.breakpoints());
    for (double x : extra)
        if (f.contains_point(x)) xs.push_back(x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    if (xs.size() == f.breakpoints().size()) return f;

    std::vector<Piece> pieces;
    std::vector<Interval> nodes;
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
        const double mid = 0.5 * (xs[j] + xs[j + 1]);
        pieces.push_back(f.pieces()[f.locate(mid).first]);
        if (j > 0) nodes.push_back(eval(f, xs[j]));
    }
    return {std::move(xs), std::move(pieces), std::move(nodes)};
}

PiecewiseFn simplify(const PiecewiseFn& f, double tol) {
    const auto& bx = f.breakpoints();
    std::vector<double> xs{bx.front()};
    std::vector<Piece> pieces{f.pieces().front()};
    std::vector<Interval> nodes;
    for (std::size_t k = 1; k + 1 < bx.size(); ++k) {
        const Piece& prev = pieces.back();
        const Piece& next = f.pieces()[k];
        const double x0 = xs.back();
        const double x1 = bx[k + 1];
        auto same_line = [&](const Affine& a, const Affine& b) {
            return near(a(x0), b(x0), tol) && near(a(x1), b(x1), tol);
        };
        const Interval& v = f.nodes()[k - 1];
        const bool redundant = same_line(prev.lower, next.lower) && same_line(prev.upper, next.upper) &&
                               near(v.lo(), prev.lower(bx[k]), tol) && near(v.hi(), prev.upper(bx[k]), tol);
        if (redundant) continue;
        xs.push_back(bx[k]);
        pieces.push_back(next);
        nodes.push_back(v);
    }
    xs.push_back(bx.back());
    return {std::move(xs), std::move(pieces), std::move(nodes)};
}

bool equal(const PiecewiseFn& f, const PiecewiseFn& g, double tol) {
    if (!f.same_domain(g)) return false;
    const auto xs = merged_breakpoints(f, g);
    const auto rf = refine(f, xs);
    const auto rg = refine(g, xs);
    for (std::size_t j = 0; j < rf.num_pieces(); ++j) {
        const auto& p = rf.pieces()[j];
        const auto& q = rg.pieces()[j];
        for (double x : {xs[j], xs[j + 1]})
            if (!near(p.lower(x), q.lower(x), tol) || !near(p.upper(x), q.upper(x), tol)) return false;
    }
    for (std::size_t k = 0; k < rf.nodes().size(); ++k)
        if (!approx_equal(rf.nodes()[k], rg.nodes()[k], tol)) return false;
    return true;
}

bool leq(const PiecewiseFn& f, const PiecewiseFn& g, double tol) {
    require_same_domain(f, g);
    const auto xs = merged_breakpoints(f, g);
    const auto rf = refine(f, xs);
    const auto rg = refine(g, xs);
    // Affine pieces: the inequality on the open piece is equivalent to it at both closure endpoints.
    for (std::size_t j = 0; j < rf.num_pieces(); ++j) {
        const auto& p = rf.pieces()[j];
        const auto& q = rg.pieces()[j];
        for (double x : {xs[j], xs[j + 1]})
            if (p.lower(x) > q.lower(x) + tol || p.upper(x) > q.upper(x) + tol) return false;
    }
    for (std::size_t k = 0; k < rf.nodes().size(); ++k) {
        const auto& a = rf.nodes()[k];
        const auto& b = rg.nodes()[k];
        if (a.lo() > b.lo() + tol || a.hi() > b.hi() + tol) return false;
    }
    return true;
}

namespace {

// Pointwise extremum of point-valued functions. `pick_max` selects max or min.
PiecewiseFn pointwise_extremum(std::span<const PiecewiseFn> fs, bool pick_max) {
    if (fs.empty()) throw std::invalid_argument("pointwise extremum of an empty family");
    for (const auto& f : fs) {
        require_same_domain(fs.front(), f);
        if (!f.is_point_valued())
            throw std::invalid_argument("pointwise extremum expects point-valued functions");
    }
    std::vector<double> xs;
    for (const auto& f : fs) xs.insert(xs.end(), f.breakpoints().begin(), f.breakpoints().end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<PiecewiseFn> refined;
    refined.reserve(fs.size());
    for (const auto& f : fs) refined.push_back(refine(f, xs));

    auto better = [pick_max](double a, double b) { return pick_max ? a > b : a < b; };

    std::vector<double> out_x{xs.front()};
    std::vector<Piece> out_pieces;
    std::vector<Interval> out_nodes;

    for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
        const double p = xs[j];
        const double q = xs[j + 1];
        if (j > 0) {
            double v = refined.front().nodes()[j - 1].lo();
            for (const auto& f : refined) {
                const double w = f.nodes()[j - 1].lo();
                if (better(w, v)) v = w;
            }
            out_nodes.emplace_back(v);
            out_x.push_back(p);
        }
        std::vector<Affine> lines;
        for (const auto& f : refined) lines.push_back(f.pieces()[j].lower);

        // Pairwise crossings strictly inside (p, q); identical or parallel lines add none.
        std::vector<double> cuts{p, q};
        for (std::size_t s = 0; s < lines.size(); ++s)
            for (std::size_t t = s + 1; t < lines.size(); ++t) {
                const double ds = lines[s].slope - lines[t].slope;
                if (ds == 0.0) continue;
                const double xc = (lines[t].intercept - lines[s].intercept) / ds;
                if (xc > p && xc < q) cuts.push_back(xc);
            }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double mid = 0.5 * (cuts[c] + cuts[c + 1]);
            Affine best = lines.front();
            for (const auto& ln : lines)
                if (better(ln(mid), best(mid))) best = ln;
            if (c > 0) {
                double v = lines.front()(cuts[c]);
                for (const auto& ln : lines)
                    if (better(ln(cuts[c]), v)) v = ln(cuts[c]);
                out_x.push_back(cuts[c]);
                out_nodes.emplace_back(v);
            }
            out_pieces.push_back({best, best});
        }
    }
    out_x.push_back(xs.back());
    return simplify(PiecewiseFn(std::move(out_x), std::move(out_pieces), std::move(out_nodes)), 0.0);
}

void check_lattice_family(std::span<const PiecewiseFn> fs, double tol) {
    if (fs.empty()) throw std::invalid_argument("lattice operation on an empty family");
    for (std::size_t i = 0; i < fs.size(); ++i) {
        require_same_domain(fs.front(), fs[i]);
        if (!is_h_continuous(fs[i], tol))
            throw std::invalid_argument("lattice operation: member " + std::to_string(i) +
                                        " is not H-continuous");
    }
}

}  // namespace

PiecewiseFn pointwise_max(std::span<const PiecewiseFn> fs) { return pointwise_extremum(fs, true); }
PiecewiseFn pointwise_min(std::span<const PiecewiseFn> fs) { return pointwise_extremum(fs, false); }

PiecewiseFn lattice_sup(std::span<const PiecewiseFn> fs, double tol) {
    check_lattice_family(fs, tol);
    std::vector<PiecewiseFn> uppers;
    for (const auto& f : fs) uppers.push_back(upper_part(f));
    const auto psi = pointwise_max(uppers);
    return simplify(graph_completion(upper_envelope(psi)), tol);
}

PiecewiseFn lattice_inf(std::span<const PiecewiseFn> fs, double tol) {
    check_lattice_family(fs, tol);
    std::vector<PiecewiseFn> lowers;
    for (const auto& f : fs) lowers.push_back(lower_part(f));
    const auto phi = pointwise_min(lowers);
    return simplify(graph_completion(lower_envelope(phi)), tol);
}

PiecewiseFn shrink_at(const PiecewiseFn& f, double x, Interval sub) {
    if (!f.contains_point(x)) throw std::invalid_argument("shrink_at: x outside the domain");
    auto [k, at_break] = f.locate(x);
    if (!at_break) throw std::invalid_argument("shrink_at: x is not an interior breakpoint");
    if (!contains(f.nodes()[k - 1], sub))
        throw std::invalid_argument("shrink_at: replacement value is not contained in f(x)");
    auto nodes = f.nodes();
    nodes[k - 1] = sub;
    return {f.breakpoints(), f.pieces(), std::move(nodes)};
}

}  // namespace hjvisc
