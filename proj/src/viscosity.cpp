#include "hjvisc/viscosity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

namespace hjvisc {

SlopeSet SlopeSet::interval(double lo, double hi) {
    if (lo > hi) throw std::invalid_argument("slope interval with lo > hi");
    if (lo == hi) return point(lo);
    return {Kind::interval, lo, hi};
}

bool SlopeSet::contains(double p) const {
    switch (kind) {
        case Kind::empty: return false;
        case Kind::point:
        case Kind::interval: return lo <= p && p <= hi;
        case Kind::half_line_up: return p >= lo;
        case Kind::half_line_down: return p <= hi;
        case Kind::whole_line: return true;
    }
    return false;
}

std::string to_string(SlopeSet::Kind kind) {
    switch (kind) {
        case SlopeSet::Kind::empty: return "empty";
        case SlopeSet::Kind::point: return "point";
        case SlopeSet::Kind::interval: return "interval";
        case SlopeSet::Kind::half_line_up: return "half_line_up";
        case SlopeSet::Kind::half_line_down: return "half_line_down";
        case SlopeSet::Kind::whole_line: return "whole_line";
    }
    return "?";
}

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n <= 1 || a == b) return {a};
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

struct Jump {
    double value;        // f(x)
    double left, right;  // one-sided limits
    double s_left, s_right;
};

std::optional<Jump> jump_at(const PiecewiseFn& f, double x) {
    if (!f.is_point_valued()) throw std::invalid_argument("expected a point-valued function");
    if (!f.contains_point(x)) throw std::out_of_range("x outside the open domain");
    auto [k, at_break] = f.locate(x);
    if (!at_break) return std::nullopt;
    return Jump{f.nodes()[k - 1].lo(), f.left_limit(k).lo(), f.right_limit(k).lo(), f.pieces()[k - 1].lower.slope,
                f.pieces()[k].lower.slope};
}

}  // namespace

std::vector<double> slope_samples(const SlopeSet& s, const SampleConfig& cfg) {
    switch (s.kind) {
        case SlopeSet::Kind::empty: return {};
        case SlopeSet::Kind::point: return {s.lo};
        case SlopeSet::Kind::interval: return {s.lo, 0.5 * (s.lo + s.hi), s.hi};
        case SlopeSet::Kind::half_line_up: return linspace(s.lo, std::max(s.lo, cfg.p_max), cfg.samples);
        case SlopeSet::Kind::half_line_down: return linspace(std::min(s.hi, -cfg.p_max), s.hi, cfg.samples);
        case SlopeSet::Kind::whole_line: return linspace(-cfg.p_max, cfg.p_max, cfg.samples);
    }
    return {};
}

SlopeSet superdifferential(const PiecewiseFn& f, double x, double tol) {
    const auto j = jump_at(f, x);
    if (!j) return SlopeSet::point(f.pieces()[f.locate(x).first].lower.slope);
    const double top = std::max(j->left, j->right);
    if (j->value < top - tol)
        throw std::invalid_argument("superdifferential: function is not upper semicontinuous at x = " +
                                    std::to_string(x));
    if (j->value > top + tol) return SlopeSet::whole_line();
    if (std::abs(j->left - j->right) <= tol)
        return j->s_right <= j->s_left ? SlopeSet::interval(j->s_right, j->s_left) : SlopeSet::empty();
    // Value sits on the higher side; the lower side never constrains p.
    return j->right > j->left ? SlopeSet::at_least(j->s_right) : SlopeSet::at_most(j->s_left);
}

SlopeSet subdifferential(const PiecewiseFn& f, double x, double tol) {
    const auto j = jump_at(f, x);
    if (!j) return SlopeSet::point(f.pieces()[f.locate(x).first].lower.slope);
    const double bottom = std::min(j->left, j->right);
    if (j->value > bottom + tol)
        throw std::invalid_argument("subdifferential: function is not lower semicontinuous at x = " +
                                    std::to_string(x));
    if (j->value < bottom - tol) return SlopeSet::whole_line();
    if (std::abs(j->left - j->right) <= tol)
        return j->s_left <= j->s_right ? SlopeSet::interval(j->s_left, j->s_right) : SlopeSet::empty();
    return j->right < j->left ? SlopeSet::at_most(j->s_right) : SlopeSet::at_least(j->s_left);
}

std::size_t VerificationReport::failures() const {
    return static_cast<std::size_t>(std::count_if(sites.begin(), sites.end(), [](const SiteCheck& s) { return !s.pass; }));
}

void VerificationReport::absorb(VerificationReport other) {
    verdict = verdict && other.verdict;
    sites.insert(sites.end(), other.sites.begin(), other.sites.end());
    truncations.insert(truncations.end(), other.truncations.begin(), other.truncations.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

std::vector<double> check_points(std::span<const double> xs, const SampleConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::vector<double> pts;
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
        if (j > 0) pts.push_back(xs[j]);
        pts.push_back(0.5 * (xs[j] + xs[j + 1]));
        std::uniform_real_distribution<double> dist(xs[j], xs[j + 1]);
        for (std::size_t e = 0; e < cfg.extra; ++e) {
            const double x = dist(rng);
            if (x > xs[j] && x < xs[j + 1]) pts.push_back(x);
        }
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

namespace {

enum class Side { sub, super };

VerificationReport verify_side(const PiecewiseFn& f, const Hamiltonian& h, const SampleConfig& cfg, Side side,
                               const std::string& role) {
    if (!f.is_point_valued())
        throw std::invalid_argument(std::string(side == Side::sub ? "subsolution" : "supersolution") +
                                    " check needs a point-valued function; split interval values into bounds first");
    VerificationReport rep;
    rep.tolerance = cfg.tol;
    rep.seed = cfg.seed;
    for (double x : check_points(f.breakpoints(), cfg)) {
        const double u = eval(f, x).lo();
        const SlopeSet set = side == Side::sub ? superdifferential(f, x, cfg.tol) : subdifferential(f, x, cfg.tol);
        if (set.kind == SlopeSet::Kind::empty) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            rep.sites.push_back({x, u, nan, nan, true, role + " (empty slope set)"});
            continue;
        }
        if (set.is_unbounded()) rep.truncations.push_back({x, set, cfg.p_max, cfg.samples, role});
        for (double p : slope_samples(set, cfg)) {
            SiteCheck site{x, u, p, 0.0, true, role};
            try {
                site.phi = h(x, u, p);
                site.pass = side == Side::sub ? site.phi <= cfg.tol : site.phi >= -cfg.tol;
            } catch (const EvalError& e) {
                site.phi = std::numeric_limits<double>::quiet_NaN();
                site.pass = false;
                rep.notes.push_back("evaluation failed at x = " + std::to_string(x) + ": " + e.what());
            }
            rep.verdict = rep.verdict && site.pass;
            rep.sites.push_back(site);
        }
    }
    return rep;
}

}  // namespace

VerificationReport verify_subsolution(const PiecewiseFn& f, const Hamiltonian& h, const SampleConfig& cfg) {
    return verify_side(f, h, cfg, Side::sub, "sub");
}

VerificationReport verify_supersolution(const PiecewiseFn& f, const Hamiltonian& h, const SampleConfig& cfg) {
    return verify_side(f, h, cfg, Side::super, "super");
}

VerificationReport verify_interval_solution(const PiecewiseFn& f, const Hamiltonian& h, const SampleConfig& cfg) {
    if (!is_s_continuous(f, cfg.tol))
        throw std::invalid_argument("interval solution check needs an S-continuous function (F(f) != f)");
    VerificationReport rep = verify_side(lower_part(f), h, cfg, Side::super, "lower/super");
    rep.absorb(verify_side(upper_part(f), h, cfg, Side::sub, "upper/sub"));
    return rep;
}

VerificationReport verify_envelope_solution(const PiecewiseFn& u, std::span<const PiecewiseFn> z1,
                                            std::span<const PiecewiseFn> z2, const Hamiltonian& h,
                                            const SampleConfig& cfg) {
    if (z1.empty() || z2.empty()) throw std::invalid_argument("envelope solution check needs nonempty families");
    if (!u.is_point_valued()) throw std::invalid_argument("envelope solution candidate must be point-valued");

    VerificationReport rep;
    rep.tolerance = cfg.tol;
    rep.seed = cfg.seed;
    rep.notes.push_back("only the given finite families are checked, at finitely many sites");

    auto members = [&](std::span<const PiecewiseFn> fam, Side side, const char* name) {
        for (std::size_t i = 0; i < fam.size(); ++i) {
            const std::string role = std::string(name) + "[" + std::to_string(i) + "]";
            if (!fam[i].same_domain(u)) throw std::invalid_argument(role + ": domain mismatch");
            try {
                rep.absorb(verify_side(fam[i], h, cfg, side, role));
            } catch (const std::invalid_argument& e) {
                rep.verdict = false;
                rep.notes.push_back(role + " is not admissible: " + e.what());
                rep.sites.push_back({std::numeric_limits<double>::quiet_NaN(), 0.0,
                                     std::numeric_limits<double>::quiet_NaN(),
                                     std::numeric_limits<double>::quiet_NaN(), false, role});
            }
        }
    };
    members(z1, Side::sub, "Z1");
    members(z2, Side::super, "Z2");

    std::vector<double> xs(u.breakpoints());
    for (const auto* fam : {&z1, &z2})
        for (const auto& f : *fam) xs.insert(xs.end(), f.breakpoints().begin(), f.breakpoints().end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double x : check_points(xs, cfg)) {
        const double ux = eval(u, x).lo();
        double sup = -std::numeric_limits<double>::infinity();
        double inf = std::numeric_limits<double>::infinity();
        for (const auto& f : z1) sup = std::max(sup, eval(f, x).hi());
        for (const auto& f : z2) inf = std::min(inf, eval(f, x).lo());
        const bool ok_sup = std::abs(sup - ux) <= cfg.tol;
        const bool ok_inf = std::abs(inf - ux) <= cfg.tol;
        rep.sites.push_back({x, ux, nan, sup, ok_sup, "sup Z1 = u"});
        rep.sites.push_back({x, ux, nan, inf, ok_inf, "inf Z2 = u"});
        rep.verdict = rep.verdict && ok_sup && ok_inf;
    }
    return rep;
}

}  // namespace hjvisc
