#pragma once

#include <vector>

#include "hjvisc/pwfn.hpp"

namespace hjvisc {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Segment {
    Point a;
    Point b;
};

/// Closed trapezoid {(x, y) : x0 ≤ x ≤ x1, lower(x) ≤ y ≤ upper(x)}.
struct Band {
    double x0 = 0.0;
    double x1 = 0.0;
    Affine lower;
    Affine upper;
};

/// Closed graph of F(f) in the plane: piece segments, breakpoint verticals,
/// and the trapezoids spanned by pieces whose bounds differ.
struct GraphSet {
    std::vector<Segment> segments;
    std::vector<Band> bands;
};

enum class Norm { euclid, max };

GraphSet graph_of(const PiecewiseFn& f);

double point_segment_distance(Point p, const Segment& s, Norm norm);
double point_band_distance(Point p, const Band& b, Norm norm);
double point_set_distance(Point p, const GraphSet& g, Norm norm);

/// Certified bracket around a supremum: value is attained, the true supremum is ≤ upper_bound.
struct DistanceBounds {
    double value = 0.0;
    double upper_bound = 0.0;
};

/// sup over A of the distance to B, by branch and bound over each segment and band of A.
DistanceBounds directed_distance(const GraphSet& from, const GraphSet& to, Norm norm);

/// Hausdorff distance between the completed graphs of f and g.
DistanceBounds hausdorff_bounds(const PiecewiseFn& f, const PiecewiseFn& g, Norm norm = Norm::euclid);
double hausdorff_distance(const PiecewiseFn& f, const PiecewiseFn& g, Norm norm = Norm::euclid);

}  // namespace hjvisc
