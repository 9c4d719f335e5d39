#include "hjvisc/graphdist.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace hjvisc {

namespace {

double norm_of(double dx, double dy, Norm norm) {
    return norm == Norm::euclid ? std::hypot(dx, dy) : std::max(std::abs(dx), std::abs(dy));
}

// Stop refining once the bound is within this of the best attained value.
double gap_tol(double best) { return 1e-12 * (1.0 + best); }

constexpr double kSegmentLengthFloor = 1e-13;
constexpr double kBandCellFloor = 1e-7;
constexpr std::size_t kBandCellBudget = 400000;

}  // namespace

GraphSet graph_of(const PiecewiseFn& f) {
    const PiecewiseFn g = graph_completion(f);
    const auto& xs = g.breakpoints();
    GraphSet out;
    for (std::size_t j = 0; j < g.num_pieces(); ++j) {
        const auto& pc = g.pieces()[j];
        const double x0 = xs[j];
        const double x1 = xs[j + 1];
        out.segments.push_back({{x0, pc.lower(x0)}, {x1, pc.lower(x1)}});
        if (!(pc.lower == pc.upper)) {
            out.segments.push_back({{x0, pc.upper(x0)}, {x1, pc.upper(x1)}});
            out.segments.push_back({{x0, pc.lower(x0)}, {x0, pc.upper(x0)}});
            out.segments.push_back({{x1, pc.lower(x1)}, {x1, pc.upper(x1)}});
            out.bands.push_back({x0, x1, pc.lower, pc.upper});
        }
    }
    for (std::size_t k = 1; k + 1 < xs.size(); ++k) {
        const Interval& v = g.nodes()[k - 1];
        if (v.width() > 0.0) out.segments.push_back({{xs[k], v.lo()}, {xs[k], v.hi()}});
    }
    return out;
}

double point_segment_distance(Point p, const Segment& s, Norm norm) {
    const double ex = s.b.x - s.a.x;
    const double ey = s.b.y - s.a.y;
    const double dx = s.a.x - p.x;
    const double dy = s.a.y - p.y;
    if (norm == Norm::euclid) {
        const double len2 = ex * ex + ey * ey;
        double t = len2 > 0.0 ? -(dx * ex + dy * ey) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        return std::hypot(dx + t * ex, dy + t * ey);
    }
    // max(|dx + t ex|, |dy + t ey|) is convex piecewise linear in t; its minimum
    // over [0, 1] sits at an endpoint or at one of its kinks.
    std::array<double, 8> ts{0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    std::size_t n = 2;
    if (ex != 0.0) ts[n++] = -dx / ex;
    if (ey != 0.0) ts[n++] = -dy / ey;
    if (ex - ey != 0.0) ts[n++] = (dy - dx) / (ex - ey);
    if (ex + ey != 0.0) ts[n++] = (-dy - dx) / (ex + ey);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double t = std::clamp(ts[i], 0.0, 1.0);
        best = std::min(best, std::max(std::abs(dx + t * ex), std::abs(dy + t * ey)));
    }
    return best;
}

double point_band_distance(Point p, const Band& b, Norm norm) {
    if (b.x0 <= p.x && p.x <= b.x1 && b.lower(p.x) <= p.y && p.y <= b.upper(p.x)) return 0.0;
    const Point ll{b.x0, b.lower(b.x0)}, lr{b.x1, b.lower(b.x1)};
    const Point ul{b.x0, b.upper(b.x0)}, ur{b.x1, b.upper(b.x1)};
    return std::min({point_segment_distance(p, {ll, lr}, norm), point_segment_distance(p, {ul, ur}, norm),
                     point_segment_distance(p, {ll, ul}, norm), point_segment_distance(p, {lr, ur}, norm)});
}

double point_set_distance(Point p, const GraphSet& g, Norm norm) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& s : g.segments) d = std::min(d, point_segment_distance(p, s, norm));
    for (const auto& b : g.bands) d = std::min(d, point_band_distance(p, b, norm));
    return d;
}

namespace {

// Distances from one point to every element of the target set. Each entry is a
// convex function of the point, so over a convex cell it peaks at a corner; the
// minimum over elements of the corner maxima bounds the cell's supremum.
class Target {
public:
    Target(const GraphSet& g, Norm norm) : g_(g), norm_(norm) {}

    std::size_t size() const { return g_.segments.size() + g_.bands.size(); }

    void distances(Point p, std::vector<double>& out) const {
        out.resize(size());
        std::size_t i = 0;
        for (const auto& s : g_.segments) out[i++] = point_segment_distance(p, s, norm_);
        for (const auto& b : g_.bands) out[i++] = point_band_distance(p, b, norm_);
    }

private:
    const GraphSet& g_;
    Norm norm_;
};

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

template <std::size_t K>
double corner_bound(const std::array<const std::vector<double>*, K>& corners) {
    double ub = std::numeric_limits<double>::infinity();
    const std::size_t n = corners[0]->size();
    for (std::size_t e = 0; e < n; ++e) {
        double m = 0.0;
        for (const auto* c : corners) m = std::max(m, (*c)[e]);
        ub = std::min(ub, m);
    }
    return ub;
}

DistanceBounds segment_sup(const Segment& s, const Target& target, Norm norm) {
    struct Cell {
        double t0, t1, ub;
        std::vector<double> d0, d1;
    };
    auto at = [&](double t) { return Point{s.a.x + t * (s.b.x - s.a.x), s.a.y + t * (s.b.y - s.a.y)}; };
    auto cmp = [](const Cell& l, const Cell& r) { return l.ub < r.ub; };
    std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> queue(cmp);

    const double length = norm_of(s.b.x - s.a.x, s.b.y - s.a.y, norm);
    Cell root{0.0, 1.0, 0.0, {}, {}};
    target.distances(s.a, root.d0);
    target.distances(s.b, root.d1);
    double best = std::max(min_of(root.d0), min_of(root.d1));
    root.ub = corner_bound<2>({&root.d0, &root.d1});
    double unresolved = best;
    queue.push(std::move(root));

    while (!queue.empty()) {
        Cell c = queue.top();
        queue.pop();
        if (c.ub <= best + gap_tol(best)) break;
        if ((c.t1 - c.t0) * length < kSegmentLengthFloor) {
            unresolved = std::max(unresolved, c.ub);
            continue;
        }
        const double tm = 0.5 * (c.t0 + c.t1);
        std::vector<double> dm;
        target.distances(at(tm), dm);
        best = std::max(best, min_of(dm));
        Cell left{c.t0, tm, 0.0, std::move(c.d0), dm};
        Cell right{tm, c.t1, 0.0, std::move(dm), std::move(c.d1)};
        left.ub = corner_bound<2>({&left.d0, &left.d1});
        right.ub = corner_bound<2>({&right.d0, &right.d1});
        if (left.ub > best + gap_tol(best)) queue.push(std::move(left));
        if (right.ub > best + gap_tol(best)) queue.push(std::move(right));
    }
    if (!queue.empty()) unresolved = std::max(unresolved, queue.top().ub);
    return {best, std::max(best, unresolved)};
}

// Cells whose bound does not exceed `floor` (a value already attained elsewhere)
// are dropped; the returned bounds are then only meaningful above `floor`.
DistanceBounds band_sup(const Band& b, const Target& target, double floor) {
    // Parameter square (s, t) ↦ (x0 + s·(x1 − x0), (1 − t)·lower + t·upper); every
    // axis-aligned sub-rectangle maps onto a trapezoid with vertical sides.
    auto at = [&](double s, double t) {
        const double x = b.x0 + s * (b.x1 - b.x0);
        return Point{x, (1.0 - t) * b.lower(x) + t * b.upper(x)};
    };
    struct Cell {
        double s0, s1, t0, t1, ub;
        std::array<std::vector<double>, 4> d;  // corners (s0,t0) (s1,t0) (s0,t1) (s1,t1)
    };
    auto bound = [](const Cell& c) { return corner_bound<4>({&c.d[0], &c.d[1], &c.d[2], &c.d[3]}); };
    auto diameter = [&](const Cell& c) {
        const Point p = at(c.s0, c.t0), q = at(c.s1, c.t1), r = at(c.s1, c.t0), w = at(c.s0, c.t1);
        return std::max(std::hypot(p.x - q.x, p.y - q.y), std::hypot(r.x - w.x, r.y - w.y));
    };
    auto cmp = [](const Cell& l, const Cell& r) { return l.ub < r.ub; };
    std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> queue(cmp);

    Cell root{0.0, 1.0, 0.0, 1.0, 0.0, {}};
    target.distances(at(0, 0), root.d[0]);
    target.distances(at(1, 0), root.d[1]);
    target.distances(at(0, 1), root.d[2]);
    target.distances(at(1, 1), root.d[3]);
    double best = 0.0;
    for (const auto& d : root.d) best = std::max(best, min_of(d));
    root.ub = bound(root);
    double unresolved = best;
    auto open = [&](double ub) {
        const double level = std::max(best, floor);
        return ub > level + gap_tol(level);
    };
    if (open(root.ub)) queue.push(std::move(root));

    std::size_t processed = 0;
    while (!queue.empty()) {
        Cell c = queue.top();
        queue.pop();
        if (!open(c.ub)) {
            queue.push(std::move(c));
            break;
        }
        if (diameter(c) < kBandCellFloor || ++processed > kBandCellBudget) {
            unresolved = std::max(unresolved, c.ub);
            continue;
        }
        const double sm = 0.5 * (c.s0 + c.s1);
        const double tm = 0.5 * (c.t0 + c.t1);
        auto dist = [&](double s, double t) {
            std::vector<double> d;
            target.distances(at(s, t), d);
            best = std::max(best, min_of(d));
            return d;
        };
        const auto bottom = dist(sm, c.t0), top = dist(sm, c.t1), left = dist(c.s0, tm),
                   right = dist(c.s1, tm), centre = dist(sm, tm);
        std::array<Cell, 4> kids{
            Cell{c.s0, sm, c.t0, tm, 0.0, {c.d[0], bottom, left, centre}},
            Cell{sm, c.s1, c.t0, tm, 0.0, {bottom, c.d[1], centre, right}},
            Cell{c.s0, sm, tm, c.t1, 0.0, {left, centre, c.d[2], top}},
            Cell{sm, c.s1, tm, c.t1, 0.0, {centre, right, top, c.d[3]}},
        };
        for (auto& k : kids) {
            k.ub = bound(k);
            if (open(k.ub)) queue.push(std::move(k));
        }
    }
    if (!queue.empty()) unresolved = std::max(unresolved, queue.top().ub);
    return {best, std::max(best, unresolved)};
}

}  // namespace

DistanceBounds directed_distance(const GraphSet& from, const GraphSet& to, Norm norm) {
    const Target target(to, norm);
    if (target.size() == 0) throw std::invalid_argument("directed distance to an empty set");
    DistanceBounds out;
    for (const auto& s : from.segments) {
        const auto r = segment_sup(s, target, norm);
        out.value = std::max(out.value, r.value);
        out.upper_bound = std::max(out.upper_bound, r.upper_bound);
    }
    for (const auto& b : from.bands) {
        const auto r = band_sup(b, target, out.value);
        out.value = std::max(out.value, r.value);
        out.upper_bound = std::max(out.upper_bound, r.upper_bound);
    }
    return out;
}

DistanceBounds hausdorff_bounds(const PiecewiseFn& f, const PiecewiseFn& g, Norm norm) {
    if (!f.same_domain(g)) throw std::invalid_argument("hausdorff distance: domain mismatch");
    const GraphSet gf = graph_of(f);
    const GraphSet gg = graph_of(g);
    const auto ab = directed_distance(gf, gg, norm);
    const auto ba = directed_distance(gg, gf, norm);
    return {std::max(ab.value, ba.value), std::max(ab.upper_bound, ba.upper_bound)};
}

double hausdorff_distance(const PiecewiseFn& f, const PiecewiseFn& g, Norm norm) {
    return hausdorff_bounds(f, g, norm).value;
}

}  // namespace hjvisc
