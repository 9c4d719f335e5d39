#pragma once

#include <span>
#include <vector>

#include "hjvisc/interval.hpp"

namespace hjvisc {

/// x ↦ intercept + slope·x
struct Affine {
    double intercept = 0.0;
    double slope = 0.0;

    double operator()(double x) const { return intercept + slope * x; }
    friend bool operator==(const Affine&, const Affine&) = default;
};

/// Bounds of an interval-valued function on one open piece.
struct Piece {
    Affine lower;
    Affine upper;

    bool is_point() const { return lower == upper; }
    friend bool operator==(const Piece&, const Piece&) = default;
};

/// Piecewise-affine interval-valued function on an open interval (a, b).
///
/// The breakpoints a = x_0 < x_1 < ... < x_m = b split the domain into m open
/// pieces, each bounded by an affine lower and upper function. Every interior
/// breakpoint carries its own interval value; x_0 and x_m lie outside the
/// open domain and carry none.
///
/// S-continuity and H-continuity are properties checked by predicates below,
/// never assumed by the type.
class PiecewiseFn {
public:
    /// `breakpoints` is the full list including both sentinels.
    PiecewiseFn(std::vector<double> breakpoints, std::vector<Piece> pieces,
                std::vector<Interval> nodes);

    static PiecewiseFn constant(double a, double b, Interval value);
    static PiecewiseFn affine(double a, double b, Affine lower, Affine upper);
    static PiecewiseFn affine(double a, double b, Affine value) { return affine(a, b, value, value); }
    /// Continuous point-valued polyline through (xs[k], ys[k]); xs includes a and b.
    static PiecewiseFn polyline(std::span<const double> xs, std::span<const double> ys);
    /// Point-valued step: `left` on (a, at), `right` on (at, b), `node` at `at`.
    static PiecewiseFn step(double a, double b, double at, double left, double right, Interval node);

    double domain_lo() const { return breaks_.front(); }
    double domain_hi() const { return breaks_.back(); }
    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    /// nodes()[k] is the value at breakpoints()[k + 1].
    const std::vector<Interval>& nodes() const { return nodes_; }
    std::size_t num_pieces() const { return pieces_.size(); }

    /// Interior breakpoints only.
    std::span<const double> interior_breakpoints() const {
        return std::span<const double>(breaks_).subspan(1, breaks_.size() - 2);
    }

    bool contains_point(double x) const { return domain_lo() < x && x < domain_hi(); }
    bool same_domain(const PiecewiseFn& other) const {
        return domain_lo() == other.domain_lo() && domain_hi() == other.domain_hi();
    }

    /// One-sided limits [lower, upper] at interior breakpoint k (1 ≤ k < m).
    Interval left_limit(std::size_t k) const;
    Interval right_limit(std::size_t k) const;
    /// Limit values of the closure at x = a (from the right) and x = b (from the left).
    Interval limit_at_lo() const;
    Interval limit_at_hi() const;

    /// Index of the piece whose open interval holds x, or of the breakpoint equal to x.
    /// Returns {piece index, true} when x is an interior breakpoint index.
    std::pair<std::size_t, bool> locate(double x) const;

    bool is_point_valued() const;

    friend bool operator==(const PiecewiseFn&, const PiecewiseFn&) = default;

private:
    std::vector<double> breaks_;
    std::vector<Piece> pieces_;
    std::vector<Interval> nodes_;
};

Interval eval(const PiecewiseFn& f, double x);

/// I(f): largest lower semicontinuous point-valued minorant; depends on the lower bound only.
PiecewiseFn lower_envelope(const PiecewiseFn& f);
/// S(f): least upper semicontinuous point-valued majorant; depends on the upper bound only.
PiecewiseFn upper_envelope(const PiecewiseFn& f);
/// F(f) = [I(f), S(f)].
PiecewiseFn graph_completion(const PiecewiseFn& f);

/// Point-valued functions made from one bound.
PiecewiseFn lower_part(const PiecewiseFn& f);
PiecewiseFn upper_part(const PiecewiseFn& f);
/// [lower, upper] from two point-valued functions on the same domain.
PiecewiseFn combine(const PiecewiseFn& lower, const PiecewiseFn& upper, double tol = kDefaultTol);

bool is_s_continuous(const PiecewiseFn& f, double tol = kDefaultTol);

/// Which of the H-continuity conditions hold: S(lower) = upper, I(upper) = lower, F(f) = f.
struct HContinuity {
    bool s_continuous = false;
    bool upper_is_envelope_of_lower = false;
    bool lower_is_envelope_of_upper = false;
    bool holds() const { return s_continuous && upper_is_envelope_of_lower && lower_is_envelope_of_upper; }
};
HContinuity h_continuity(const PiecewiseFn& f, double tol = kDefaultTol);
bool is_h_continuous(const PiecewiseFn& f, double tol = kDefaultTol);

/// Point-valued x ↦ upper(x) − lower(x).
PiecewiseFn width_fn(const PiecewiseFn& f);

/// Componentwise order: lower(f) ≤ lower(g) and upper(f) ≤ upper(g) everywhere.
bool leq(const PiecewiseFn& f, const PiecewiseFn& g, double tol = kDefaultTol);

/// Value equality after breakpoint merging.
bool equal(const PiecewiseFn& f, const PiecewiseFn& g, double tol = kDefaultTol);

/// Supremum in the lattice of H-continuous functions: F(S(pointwise max of uppers)).
PiecewiseFn lattice_sup(std::span<const PiecewiseFn> fs, double tol = kDefaultTol);
/// Infimum: F(I(pointwise min of lowers)).
PiecewiseFn lattice_inf(std::span<const PiecewiseFn> fs, double tol = kDefaultTol);

/// Pointwise max/min of point-valued functions, with crossings inserted as breakpoints.
PiecewiseFn pointwise_max(std::span<const PiecewiseFn> fs);
PiecewiseFn pointwise_min(std::span<const PiecewiseFn> fs);

/// Copy of f whose value at interior breakpoint x is replaced by sub ⊆ f(x).
PiecewiseFn shrink_at(const PiecewiseFn& f, double x, Interval sub);

/// Same function with the given points (inside the domain) added as breakpoints.
PiecewiseFn refine(const PiecewiseFn& f, std::span<const double> xs);
/// Drop breakpoints between collinear pieces whose node is the shared value.
PiecewiseFn simplify(const PiecewiseFn& f, double tol = kDefaultTol);

/// Sorted union of the breakpoints of two functions on the same domain.
std::vector<double> merged_breakpoints(const PiecewiseFn& f, const PiecewiseFn& g);

}  // namespace hjvisc
