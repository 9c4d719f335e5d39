#pragma once

// Seeded random piecewise functions on (0, 1). Coefficients and breakpoints
// are multiples of 1/64, so evaluation and limits are exact in double.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "hjvisc/pwfn.hpp"

namespace hjvisc::testing {

class FnGen {
public:
    explicit FnGen(std::uint64_t seed) : rng_(seed) {}

    std::mt19937_64& rng() { return rng_; }

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    /// Multiple of 1/64 in [lo, hi].
    double dyadic(double lo, double hi) { return integer(static_cast<int>(lo * 64), static_cast<int>(hi * 64)) / 64.0; }

    /// Full breakpoint list 0 = x_0 < ... < x_m = 1 with m - 1 interior dyadic points.
    std::vector<double> breaks(int max_interior = 4) {
        const int m = integer(0, max_interior);
        std::set<int> pts;
        while (static_cast<int>(pts.size()) < m) pts.insert(integer(1, 63));
        std::vector<double> xs{0.0};
        for (int k : pts) xs.push_back(k / 64.0);
        xs.push_back(1.0);
        return xs;
    }

    Affine affine() { return {dyadic(-2, 2), dyadic(-2, 2)}; }

    /// Arbitrary member of the class: proper bands, arbitrary node intervals.
    PiecewiseFn general() {
        const auto xs = breaks();
        std::vector<Piece> pieces;
        for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
            const Affine lo = affine();
            if (coin()) {
                pieces.push_back({lo, lo});
            } else {
                // gap c + d x stays nonnegative on [0, 1]
                const double c = dyadic(0, 1);
                const double d = dyadic(-c, 1);
                pieces.push_back({lo, {lo.intercept + c, lo.slope + d}});
            }
        }
        std::vector<Interval> nodes;
        for (std::size_t k = 1; k + 1 < xs.size(); ++k) {
            const double a = dyadic(-3, 3);
            nodes.push_back(coin() ? Interval(a) : Interval(a, a + dyadic(0, 2)));
        }
        return {xs, pieces, nodes};
    }

    /// Point-valued pieces and point node values at random heights.
    PiecewiseFn point_valued() {
        const auto xs = breaks();
        std::vector<Piece> pieces;
        for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
            const Affine a = affine();
            pieces.push_back({a, a});
        }
        std::vector<Interval> nodes;
        for (std::size_t k = 1; k + 1 < xs.size(); ++k) {
            const double l = pieces[k - 1].lower(xs[k]);
            const double r = pieces[k].lower(xs[k]);
            switch (integer(0, 3)) {
                case 0: nodes.emplace_back(l); break;
                case 1: nodes.emplace_back(r); break;
                case 2: nodes.emplace_back(std::max(l, r) + dyadic(0, 1)); break;
                default: nodes.emplace_back(std::min(l, r) - dyadic(0, 1)); break;
            }
        }
        return {xs, pieces, nodes};
    }

    /// Point-valued pieces whose nodes span exactly the jump: H-continuous by construction.
    PiecewiseFn h_continuous() {
        const auto xs = breaks();
        std::vector<Piece> pieces;
        for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
            Affine a = affine();
            // keep some breakpoints continuous
            if (k > 0 && coin(0.3)) a.intercept = pieces[k - 1].lower(xs[k]) - a.slope * xs[k];
            pieces.push_back({a, a});
        }
        std::vector<Interval> nodes;
        for (std::size_t k = 1; k + 1 < xs.size(); ++k) {
            const double l = pieces[k - 1].lower(xs[k]);
            const double r = pieces[k].lower(xs[k]);
            nodes.emplace_back(std::min(l, r), std::max(l, r));
        }
        return {xs, pieces, nodes};
    }

    /// Continuous polyline through dyadic values.
    PiecewiseFn continuous() {
        const auto xs = breaks();
        std::vector<double> ys;
        for (std::size_t k = 0; k < xs.size(); ++k) ys.push_back(dyadic(-2, 2));
        return PiecewiseFn::polyline(xs, ys);
    }

    /// Random point ξ in (0, 1) that is a multiple of 1/4096 (never 0 or 1).
    double point() { return integer(1, 4095) / 4096.0; }

private:
    std::mt19937_64 rng_;
};

}  // namespace hjvisc::testing
