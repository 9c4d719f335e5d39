#include "hjvisc/perron.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

namespace hjvisc {

GridFn::GridFn(double a, double b, std::vector<Interval> values) : a_(a), b_(b), values_(std::move(values)) {
    if (!(a_ < b_)) throw std::invalid_argument("grid domain needs a < b");
    if (values_.size() < 3) throw std::invalid_argument("grid needs at least 3 nodes");
}

bool GridFn::is_point_valued() const {
    return std::all_of(values_.begin(), values_.end(), [](const Interval& v) { return v.is_point(); });
}

GridFn sample_to_grid(const PiecewiseFn& f, std::size_t n) {
    if (n < 3) throw std::invalid_argument("grid needs at least 3 nodes");
    std::vector<Interval> values(n);
    const double a = f.domain_lo();
    const double b = f.domain_hi();
    values.front() = f.limit_at_lo();
    values.back() = f.limit_at_hi();
    for (std::size_t i = 1; i + 1 < n; ++i)
        values[i] = eval(f, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    return {a, b, std::move(values)};
}

GridFn discrete_envelopes(const GridFn& g) {
    std::vector<Interval> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::size_t from = i == 0 ? 0 : i - 1;
        const std::size_t to = std::min(i + 1, g.size() - 1);
        double lo = g[i].lo();
        double hi = g[i].hi();
        for (std::size_t j = from; j <= to; ++j) {
            lo = std::min(lo, g[j].lo());
            hi = std::max(hi, g[j].hi());
        }
        out[i] = {lo, hi};
    }
    return {g.lo(), g.hi(), std::move(out)};
}

bool grid_leq(const GridFn& f, const GridFn& g, double tol) {
    if (f.size() != g.size() || f.lo() != g.lo() || f.hi() != g.hi())
        throw std::invalid_argument("grid comparison needs identical grids");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i].lo() > g[i].lo() + tol || f[i].hi() > g[i].hi() + tol) return false;
    return true;
}

namespace {

void require_interior(const GridFn& g, std::size_t i) {
    if (i == 0 || i + 1 >= g.size()) throw std::out_of_range("node " + std::to_string(i) + " is not interior");
}

}  // namespace

SlopeSet discrete_superdifferential(const GridFn& g, std::size_t i, double tol) {
    require_interior(g, i);
    const double hs = g.spacing();
    const double sl = (g[i].hi() - g[i - 1].hi()) / hs;
    const double sr = (g[i + 1].hi() - g[i].hi()) / hs;
    if (sr <= sl + tol) return SlopeSet::interval(std::min(sr, sl), std::max(sr, sl));
    return SlopeSet::empty();
}

SlopeSet discrete_subdifferential(const GridFn& g, std::size_t i, double tol) {
    require_interior(g, i);
    const double hs = g.spacing();
    const double sl = (g[i].lo() - g[i - 1].lo()) / hs;
    const double sr = (g[i + 1].lo() - g[i].lo()) / hs;
    if (sl <= sr + tol) return SlopeSet::interval(std::min(sl, sr), std::max(sl, sr));
    return SlopeSet::empty();
}

namespace {

// Most violating sample at node i: max Φ for sub, min Φ for super. nullopt when
// the slope set is empty. Evaluation failures count as violations.
struct NodeTest {
    double p = 0.0;
    double phi = 0.0;
    bool pass = true;
};

std::optional<NodeTest> test_node(const GridFn& g, std::size_t i, const Hamiltonian& h, Mode mode,
                                  const SampleConfig& cfg) {
    const SlopeSet set =
        mode == Mode::sub ? discrete_superdifferential(g, i, cfg.tol) : discrete_subdifferential(g, i, cfg.tol);
    if (set.kind == SlopeSet::Kind::empty) return std::nullopt;
    const double x = g.node(i);
    const double v = mode == Mode::sub ? g[i].hi() : g[i].lo();
    NodeTest worst;
    bool first = true;
    for (double p : slope_samples(set, cfg)) {
        double phi;
        try {
            phi = h(x, v, p);
        } catch (const EvalError&) {
            return NodeTest{p, std::numeric_limits<double>::quiet_NaN(), false};
        }
        const bool worse = mode == Mode::sub ? phi > worst.phi : phi < worst.phi;
        if (first || worse) worst = {p, phi, true};
        first = false;
    }
    worst.pass = mode == Mode::sub ? worst.phi <= cfg.tol : worst.phi >= -cfg.tol;
    return worst;
}

bool node_passes(const GridFn& g, std::size_t i, const Hamiltonian& h, Mode mode, const SampleConfig& cfg) {
    const auto t = test_node(g, i, h, mode, cfg);
    return !t || t->pass;
}

}  // namespace

VerificationReport discrete_verify(const GridFn& g, const Hamiltonian& h, Mode mode, const SampleConfig& cfg) {
    VerificationReport rep;
    rep.tolerance = cfg.tol;
    rep.seed = cfg.seed;
    const std::string role = mode == Mode::sub ? "sub" : "super";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        const double x = g.node(i);
        const double v = mode == Mode::sub ? g[i].hi() : g[i].lo();
        const SlopeSet set =
            mode == Mode::sub ? discrete_superdifferential(g, i, cfg.tol) : discrete_subdifferential(g, i, cfg.tol);
        if (set.kind == SlopeSet::Kind::empty) {
            rep.sites.push_back({x, v, nan, nan, true, role + " (empty slope set)"});
            continue;
        }
        for (double p : slope_samples(set, cfg)) {
            SiteCheck site{x, v, p, nan, false, role};
            try {
                site.phi = h(x, v, p);
                site.pass = mode == Mode::sub ? site.phi <= cfg.tol : site.phi >= -cfg.tol;
            } catch (const EvalError& e) {
                rep.notes.push_back("evaluation failed at x = " + std::to_string(x) + ": " + e.what());
            }
            rep.verdict = rep.verdict && site.pass;
            rep.sites.push_back(site);
        }
    }
    return rep;
}

BumpResult bump(const GridFn& g, std::size_t y, double delta, double radius, const Hamiltonian& h,
                const SampleConfig& cfg, std::size_t max_retries) {
    require_interior(g, y);
    if (!(delta > 0.0) || !(radius > 0.0)) throw std::invalid_argument("bump needs positive delta and radius");
    const auto failure = test_node(g, y, h, Mode::super, cfg);
    if (!failure || failure->pass)
        throw std::invalid_argument("bump unwarranted: the supersolution test passes at node " + std::to_string(y));

    const std::size_t n = g.size();
    const double xy = g.node(y);
    const double ly = g[y].lo();
    const double p = failure->p;

    for (std::size_t attempt = 0; attempt <= max_retries; ++attempt, delta *= 0.5, radius *= 0.5) {
        std::vector<std::size_t> ball;
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(g.node(i) - xy) < radius) ball.push_back(i);

        // Lower the cap until it stays below ly + delta throughout the ball.
        double excess = 0.0;
        for (std::size_t i : ball) {
            const double d = g.node(i) - xy;
            excess = std::max(excess, p * d - d * d / radius);
        }
        const double height = delta - excess;
        if (!(height > 0.0)) continue;

        GridFn w = g;
        for (std::size_t i : ball) {
            const double d = g.node(i) - xy;
            const double cap = ly + height + p * d - d * d / radius;
            w[i] = {std::max(g[i].lo(), cap), std::max(g[i].hi(), cap)};
        }

        BumpChecks c;
        c.upper_still_subsolution = true;
        const std::size_t from = ball.front() > 1 ? ball.front() - 1 : 1;
        const std::size_t to = std::min(ball.back() + 1, n - 2);
        for (std::size_t i = from; i <= to; ++i)
            if (node_passes(g, i, h, Mode::sub, cfg) && !node_passes(w, i, h, Mode::sub, cfg))
                c.upper_still_subsolution = false;
        c.raised_everywhere = grid_leq(g, w, 0.0);
        c.changed = !(w == g);
        c.unchanged_outside_ball = true;
        for (std::size_t i = 0; i < n; ++i)
            if ((i < ball.front() || i > ball.back()) && !(w[i] == g[i])) c.unchanged_outside_ball = false;
        c.lower_capped = true;
        for (std::size_t i : ball)
            if (w[i].lo() > std::max(g[i].lo(), ly + delta) + cfg.tol) c.lower_capped = false;

        if (c.all()) return {std::move(w), delta, radius, p, failure->phi, attempt, c};
    }
    throw std::runtime_error("bump at node " + std::to_string(y) +
                             ": could not keep the upper values a discrete subsolution after " +
                             std::to_string(max_retries) + " shrinkages");
}

std::string to_string(TraceRecord::Kind kind) {
    switch (kind) {
        case TraceRecord::Kind::bump: return "bump";
        case TraceRecord::Kind::rejected: return "rejected";
        case TraceRecord::Kind::stalled: return "stalled";
        case TraceRecord::Kind::sweep: return "sweep";
    }
    return "?";
}

namespace {

GridFn nodewise_max(const GridFn& f, const GridFn& g) {
    std::vector<Interval> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        out[i] = {std::max(f[i].lo(), g[i].lo()), std::max(f[i].hi(), g[i].hi())};
    return {f.lo(), f.hi(), std::move(out)};
}

// Raise single nodes to point values as far as the sampled cap and the discrete
// subsolution property allow. Returns the number of nodes raised by more than
// min_raise.
std::size_t maximality_sweep(GridFn& g, const GridFn& cap, const Hamiltonian& h, const SampleConfig& cfg,
                             double min_raise) {
    const std::size_t n = g.size();
    std::size_t raised = 0;
    auto neighbours_ok = [&](std::size_t i, const std::array<bool, 3>& before) {
        for (std::size_t k = 0; k < 3; ++k) {
            const std::size_t j = i + k;  // j - 1 is the tested node
            if (j == 0 || j - 1 == 0 || j - 1 >= n - 1) continue;
            if (before[k] && !node_passes(g, j - 1, h, Mode::sub, cfg)) return false;
        }
        return true;
    };
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t step = 0; step < n; ++step) {
            const std::size_t i = pass == 0 ? step : n - 1 - step;
            const Interval old = g[i];
            const double top = cap[i].lo();
            if (!(top > old.hi())) continue;
            std::array<bool, 3> before{};
            for (std::size_t k = 0; k < 3; ++k) {
                const std::size_t j = i + k;
                before[k] = j >= 2 && j - 1 < n - 1 && node_passes(g, j - 1, h, Mode::sub, cfg);
            }
            auto feasible = [&](double t) {
                g[i] = {std::max(old.lo(), t), t};
                const bool ok = neighbours_ok(i, before);
                g[i] = old;
                return ok;
            };
            double best = old.hi();
            if (feasible(top)) {
                best = top;
            } else {
                double lo = old.hi();
                double hi = top;
                for (int it = 0; it < 60 && hi - lo > 0.0; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (feasible(mid) ? lo : hi) = mid;
                }
                best = lo;
            }
            if (best > old.hi()) {
                g[i] = {std::max(old.lo(), best), best};
                if (best - old.hi() > min_raise) ++raised;
            }
        }
    }
    return raised;
}

double max_residual(const VerificationReport& rep, Mode mode) {
    double r = 0.0;
    for (const auto& s : rep.sites) {
        if (std::isnan(s.p)) continue;
        if (std::isnan(s.phi)) return std::numeric_limits<double>::infinity();
        r = std::max(r, mode == Mode::sub ? s.phi : -s.phi);
    }
    return r;
}

}  // namespace

SolveResult perron_solve(const Hamiltonian& h, const PiecewiseFn& u1, const PiecewiseFn& u2, std::size_t n,
                         const SolveConfig& cfg) {
    if (!u1.same_domain(u2)) throw std::invalid_argument("perron: u1 and u2 live on different domains");
    if (!is_h_continuous(u1, cfg.sample.tol)) throw std::invalid_argument("perron: u1 is not H-continuous");
    if (!is_h_continuous(u2, cfg.sample.tol)) throw std::invalid_argument("perron: u2 is not H-continuous");
    if (!leq(u1, u2, cfg.sample.tol)) throw std::invalid_argument("perron: u1 <= u2 does not hold");
    if (!verify_subsolution(upper_part(u1), h, cfg.sample).verdict)
        throw std::invalid_argument("perron: upper bound of u1 is not a subsolution");
    if (!verify_supersolution(lower_part(u2), h, cfg.sample).verdict)
        throw std::invalid_argument("perron: lower bound of u2 is not a supersolution");

    GridFn g = sample_to_grid(u1, n);
    const GridFn cap = sample_to_grid(u2, n);
    const double hs = g.spacing();
    SampleConfig tcfg = cfg.sample;
    tcfg.tol = cfg.residual_tol;

    SolveTrace trace;
    std::vector<bool> stalled(n, false);
    std::size_t changes = 0;
    auto snapshot = [&] {
        if (cfg.snapshot_every > 0 && changes % cfg.snapshot_every == 0) trace.snapshots.push_back(g);
    };
    auto advance_to = [&](GridFn next) {
        if (!grid_leq(g, next, 0.0)) trace.monotone = false;
        g = std::move(next);
        ++changes;
        snapshot();
    };
    if (cfg.snapshot_every > 0) trace.snapshots.push_back(g);

    bool finished = false;
    for (; trace.iterations < cfg.max_iters; ++trace.iterations) {
        std::size_t worst = 0;
        double worst_phi = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (stalled[i]) continue;
            const auto t = test_node(g, i, h, Mode::super, tcfg);
            if (t && !t->pass && (worst == 0 || t->phi < worst_phi || std::isnan(t->phi))) {
                worst = i;
                worst_phi = std::isnan(t->phi) ? -std::numeric_limits<double>::infinity() : t->phi;
            }
        }

        if (worst != 0) {
            double delta = std::max(hs, std::isfinite(worst_phi) ? std::abs(worst_phi) * hs : hs);
            const double radius = 4.0 * hs;
            bool accepted = false;
            for (std::size_t attempt = 0; attempt <= cfg.max_retries && !accepted; ++attempt, delta *= 0.5) {
                std::optional<BumpResult> attempt_result;
                try {
                    attempt_result = bump(g, worst, delta, radius, h, tcfg, cfg.max_retries);
                } catch (const std::runtime_error&) {
                    break;
                } catch (const std::invalid_argument&) {
                    break;
                }
                const BumpResult& br = *attempt_result;
                TraceRecord rec{TraceRecord::Kind::bump, worst, g.node(worst), br.delta, br.radius, br.witness,
                                br.phi, g[worst], br.w[worst], 0, br.checks};
                if (!grid_leq(br.w, cap, cfg.sample.tol)) {
                    rec.kind = TraceRecord::Kind::rejected;
                    trace.records.push_back(rec);
                    ++trace.rejected;
                    continue;
                }
                for (std::size_t i = 0; i < n; ++i) rec.raised += br.w[i] == g[i] ? 0 : 1;
                trace.records.push_back(rec);
                ++trace.bumps;
                advance_to(nodewise_max(g, br.w));
                accepted = true;
            }
            if (!accepted) {
                stalled[worst] = true;
                TraceRecord rec;
                rec.kind = TraceRecord::Kind::stalled;
                rec.node = worst;
                rec.x = g.node(worst);
                rec.phi = worst_phi;
                rec.before = rec.after = g[worst];
                trace.records.push_back(rec);
            }
            continue;
        }

        GridFn next = g;
        const std::size_t raised = maximality_sweep(next, cap, h, tcfg, cfg.residual_tol * hs);
        if (raised > 0) {
            TraceRecord rec;
            rec.kind = TraceRecord::Kind::sweep;
            rec.raised = raised;
            trace.records.push_back(rec);
            ++trace.sweeps;
            advance_to(std::move(next));
            std::fill(stalled.begin(), stalled.end(), false);
            continue;
        }
        g = std::move(next);
        finished = true;
        break;
    }

    const auto sub = discrete_verify(g, h, Mode::sub, tcfg);
    const auto super = discrete_verify(g, h, Mode::super, tcfg);
    trace.sub_residual = max_residual(sub, Mode::sub);
    trace.super_residual = max_residual(super, Mode::super);
    if (cfg.snapshot_every > 0) trace.snapshots.push_back(g);

    if (!finished) {
        trace.termination = "max_iters";
        throw NonConvergence("perron: no convergence within " + std::to_string(cfg.max_iters) + " iterations",
                             std::move(trace));
    }
    if (!sub.verdict || !super.verdict) {
        trace.termination = "stalled";
        throw NonConvergence("perron: stalled with residuals sub " + std::to_string(trace.sub_residual) +
                                 ", super " + std::to_string(trace.super_residual),
                             std::move(trace));
    }
    trace.termination = "converged";
    return {std::move(g), std::move(trace)};
}

}  // namespace hjvisc
