#pragma once

// Independent reference computations. None of these call the library routine
// they are used to check.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjvisc/graphdist.hpp"
#include "hjvisc/pwfn.hpp"

namespace hjvisc::testing {

// ---------------------------------------------------------------------------
// Dense sampling of completed graphs

/// Points of the closed graph of F(f): each piece sampled every dx in x and
/// every dy between its bounds, each breakpoint sampled every dy over the hull
/// of its node value and both one-sided limits. Built from raw pieces only.
inline std::vector<Point> sample_graph(const PiecewiseFn& f, double dx, double dy) {
    std::vector<Point> pts;
    auto column = [&](double x, double lo, double hi) {
        const auto n = static_cast<long>(std::floor((hi - lo) / dy));
        for (long i = 0; i <= n; ++i) pts.push_back({x, lo + static_cast<double>(i) * dy});
        if (lo + static_cast<double>(n) * dy < hi) pts.push_back({x, hi});
    };
    const auto& xs = f.breakpoints();
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        const Piece& p = f.pieces()[k];
        const auto n = static_cast<long>(std::ceil((xs[k + 1] - xs[k]) / dx));
        for (long i = 0; i <= n; ++i) {
            const double x = i == n ? xs[k + 1] : xs[k] + static_cast<double>(i) * dx;
            column(x, p.lower(x), std::max(p.lower(x), p.upper(x)));
        }
    }
    for (std::size_t k = 1; k + 1 < xs.size(); ++k) {
        const Piece& l = f.pieces()[k - 1];
        const Piece& r = f.pieces()[k];
        const Interval node = f.nodes()[k - 1];
        const double x = xs[k];
        const double lo = std::min({node.lo(), l.lower(x), r.lower(x)});
        const double hi = std::max({node.hi(), l.upper(x), r.upper(x)});
        column(x, lo, hi);
    }
    return pts;
}

/// sup over a ∈ A of min over b ∈ B of the distance. B is split into columns
/// of equal x holding sorted y values; columns are scanned outward from a.x.
/// Points are visited in order and skipped when the previous upper bound plus
/// their separation (the distance to a set is 1-Lipschitz) cannot beat the
/// running supremum.
inline double sampled_directed(const std::vector<Point>& A, const std::vector<Point>& B, Norm norm) {
    auto dist = [norm](double dx, double dy) {
        dx = std::abs(dx), dy = std::abs(dy);
        return norm == Norm::euclid ? std::hypot(dx, dy) : std::max(dx, dy);
    };
    std::vector<Point> sorted = B;
    std::sort(sorted.begin(), sorted.end(), [](const Point& p, const Point& q) { return p.x < q.x || (p.x == q.x && p.y < q.y); });
    std::vector<double> cx;
    std::vector<std::vector<double>> cy;
    for (const Point& b : sorted) {
        if (cx.empty() || cx.back() != b.x) cx.push_back(b.x), cy.emplace_back();
        cy.back().push_back(b.y);
    }
    auto column_nearest = [&](std::size_t k, const Point& a) {
        const auto& ys = cy[k];
        const auto it = std::lower_bound(ys.begin(), ys.end(), a.y);
        double dy = std::numeric_limits<double>::infinity();
        if (it != ys.end()) dy = *it - a.y;
        if (it != ys.begin()) dy = std::min(dy, a.y - *(it - 1));
        return dist(cx[k] - a.x, dy);
    };
    // Nearest distance, or any value <= stop once one is found.
    auto nearest = [&](const Point& a, double stop) {
        const auto mid = static_cast<std::size_t>(std::lower_bound(cx.begin(), cx.end(), a.x) - cx.begin());
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = mid; k < cx.size() && cx[k] - a.x < best && best > stop; ++k)
            best = std::min(best, column_nearest(k, a));
        for (std::size_t k = mid; k > 0 && best > stop;) {
            --k;
            if (a.x - cx[k] >= best) break;
            best = std::min(best, column_nearest(k, a));
        }
        return best;
    };
    double worst = 0.0;
    for (std::size_t i = 0; i < A.size(); i += 16) worst = std::max(worst, nearest(A[i], -1.0));
    Point prev{};
    double prev_ub = std::numeric_limits<double>::infinity();
    for (const Point& a : A) {
        if (prev_ub + dist(a.x - prev.x, a.y - prev.y) <= worst) continue;
        const double d = nearest(a, worst);
        worst = std::max(worst, d);
        prev = a, prev_ub = d;
    }
    return worst;
}

inline double sampled_hausdorff(const PiecewiseFn& f, const PiecewiseFn& g, Norm norm, double dx, double dy) {
    const auto A = sample_graph(f, dx, dy);
    const auto B = sample_graph(g, dx, dy);
    return std::max(sampled_directed(A, B, norm), sampled_directed(B, A, norm));
}

// ---------------------------------------------------------------------------
// Envelopes by refinement

/// One-sided limit of a bound at x, extrapolated linearly from samples at
/// x + dir·ε and x + 2·dir·ε. Exact for affine pieces once both samples lie
/// in the adjacent piece; with dyadic inputs no rounding occurs.
template <class Bound>
double extrapolated_limit(const PiecewiseFn& f, double x, int dir, Bound bound, double eps = 0x1p-20) {
    const double a = bound(eval(f, x + dir * eps));
    const double b = bound(eval(f, x + 2 * dir * eps));
    return 2 * a - b;
}

/// S(f)(x) from the value at x and the extrapolated one-sided limits of the upper bound.
inline double refined_upper(const PiecewiseFn& f, double x) {
    auto hi = [](Interval v) { return v.hi(); };
    return std::max({eval(f, x).hi(), extrapolated_limit(f, x, -1, hi), extrapolated_limit(f, x, 1, hi)});
}

inline double refined_lower(const PiecewiseFn& f, double x) {
    auto lo = [](Interval v) { return v.lo(); };
    return std::min({eval(f, x).lo(), extrapolated_limit(f, x, -1, lo), extrapolated_limit(f, x, 1, lo)});
}

// ---------------------------------------------------------------------------
// Reference evaluator for Hamiltonian text: evaluates while parsing

class ReferenceEvaluator {
public:
    struct DivisionByZero : std::runtime_error {
        DivisionByZero() : std::runtime_error("division by zero") {}
    };
    struct Syntax : std::runtime_error {
        using std::runtime_error::runtime_error;
    };

    static double evaluate(const std::string& text, double x, double u, double p) {
        ReferenceEvaluator r(text, x, u, p);
        const double v = r.sum();
        r.skip();
        if (r.i_ != r.s_.size()) throw Syntax("trailing input");
        return v;
    }

private:
    ReferenceEvaluator(const std::string& s, double x, double u, double p) : s_(s), x_(x), u_(u), p_(p) {}

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw Syntax(std::string("expected ") + c);
    }

    double sum() {
        double v = product();
        for (;;) {
            if (eat('+')) v = v + product();
            else if (eat('-')) v = v - product();
            else return v;
        }
    }
    double product() {
        double v = unary();
        for (;;) {
            if (eat('*')) {
                v = v * unary();
            } else if (eat('/')) {
                const double d = unary();
                if (d == 0.0) throw DivisionByZero();
                v = v / d;
            } else {
                return v;
            }
        }
    }
    double unary() {
        if (eat('-')) return -unary();
        return power();
    }
    double power() {
        const double base = primary();
        if (!eat('^')) return base;
        const unsigned long n = exponent();
        double r = 1.0;
        for (unsigned long k = 0; k < n; ++k) r *= base;
        return r;
    }
    unsigned long exponent() {
        skip();
        std::size_t j = i_;
        while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
        if (j == i_) throw Syntax("expected exponent");
        unsigned long n = std::stoul(s_.substr(i_, j - i_));
        i_ = j;
        if (eat('^')) {
            const unsigned long m = exponent();
            unsigned long r = 1;
            for (unsigned long k = 0; k < m; ++k) r *= n;
            n = r;
        }
        return n;
    }
    double primary() {
        skip();
        if (i_ >= s_.size()) throw Syntax("unexpected end");
        const char c = s_[i_];
        if (c == '(') {
            ++i_;
            const double v = sum();
            expect(')');
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            const double v = std::strtod(s_.c_str() + i_, &end);
            i_ = static_cast<std::size_t>(end - s_.c_str());
            return v;
        }
        std::size_t j = i_;
        while (j < s_.size() && std::isalpha(static_cast<unsigned char>(s_[j]))) ++j;
        const std::string name = s_.substr(i_, j - i_);
        i_ = j;
        if (name == "x") return x_;
        if (name == "u") return u_;
        if (name == "p") return p_;
        if (name == "abs") {
            expect('(');
            const double v = sum();
            expect(')');
            return std::abs(v);
        }
        if (name == "min" || name == "max") {
            expect('(');
            const double a = sum();
            expect(',');
            const double b = sum();
            expect(')');
            return name == "min" ? std::min(a, b) : std::max(a, b);
        }
        throw Syntax("unknown name " + name);
    }

    const std::string& s_;
    std::size_t i_ = 0;
    double x_, u_, p_;
};

}  // namespace hjvisc::testing
