#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hjvisc {

/// Tolerance used for verdicts derived from floating-point arithmetic.
inline constexpr double kDefaultTol = 1e-9;

/// Closed bounded real interval [lo, hi]. A point interval identifies a real.
class Interval {
public:
    constexpr Interval() = default;
    Interval(double point) : lo_(point), hi_(point) {  // NOLINT(implicit)
        check();
    }
    Interval(double lo, double hi) : lo_(lo), hi_(hi) { check(); }

    constexpr double lo() const { return lo_; }
    constexpr double hi() const { return hi_; }
    constexpr double width() const { return hi_ - lo_; }
    constexpr bool is_point() const { return lo_ == hi_; }

    friend constexpr bool operator==(const Interval&, const Interval&) = default;

private:
    void check() const {
        if (!std::isfinite(lo_) || !std::isfinite(hi_))
            throw std::invalid_argument("interval bounds must be finite");
        if (lo_ > hi_)
            throw std::invalid_argument("interval with lo > hi: [" + std::to_string(lo_) +
                                        ", " + std::to_string(hi_) + "]");
    }

    double lo_ = 0.0;
    double hi_ = 0.0;
};

inline double width(const Interval& v) { return v.width(); }

/// True iff inner ⊆ outer.
inline bool contains(const Interval& outer, const Interval& inner) {
    return outer.lo() <= inner.lo() && inner.hi() <= outer.hi();
}

inline Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

/// Bound-wise comparison within an absolute tolerance.
inline bool approx_equal(const Interval& a, const Interval& b, double tol = kDefaultTol) {
    return std::abs(a.lo() - b.lo()) <= tol && std::abs(a.hi() - b.hi()) <= tol;
}

}  // namespace hjvisc
