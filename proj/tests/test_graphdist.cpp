#include <doctest.h>

#include <cmath>

#include "hjvisc/graphdist.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace hjvisc;
using hjvisc::testing::FnGen;

namespace {

PiecewiseFn completed_step() { return PiecewiseFn::step(0, 1, 0.5, 0, 1, {0, 1}); }
PiecewiseFn zero() { return PiecewiseFn::constant(0, 1, 0.0); }

}  // namespace

TEST_CASE("point to segment distances") {
    const Segment s{{0, 0}, {1, 0}};
    CHECK(point_segment_distance({0.5, 2}, s, Norm::euclid) == 2.0);
    CHECK(point_segment_distance({2, 0}, s, Norm::euclid) == 1.0);
    CHECK(point_segment_distance({2, 1}, s, Norm::euclid) == doctest::Approx(std::sqrt(2.0)));
    CHECK(point_segment_distance({2, 1}, s, Norm::max) == 1.0);
    const Segment diag{{0, 0}, {1, 1}};
    CHECK(point_segment_distance({0, 1}, diag, Norm::euclid) == doctest::Approx(std::sqrt(0.5)));
    CHECK(point_segment_distance({0, 1}, diag, Norm::max) == doctest::Approx(0.5));
    const Segment dot{{1, 1}, {1, 1}};
    CHECK(point_segment_distance({4, 5}, dot, Norm::euclid) == 5.0);
}

TEST_CASE("point to band distance is zero inside") {
    const Band b{0, 1, {0, 1}, {1, 1}};
    CHECK(point_band_distance({0.5, 1.0}, b, Norm::euclid) == 0.0);
    CHECK(point_band_distance({0.5, 2.0}, b, Norm::euclid) == doctest::Approx(std::sqrt(0.125)));
    CHECK(point_band_distance({2.0, 1.5}, b, Norm::max) == doctest::Approx(1.0));
}

TEST_CASE("graph of a function") {
    const GraphSet id = graph_of(PiecewiseFn::affine(0, 1, {0, 1}));
    REQUIRE(id.segments.size() == 1);
    CHECK(id.bands.empty());
    CHECK(id.segments[0].a.x == 0.0);
    CHECK(id.segments[0].b.y == 1.0);

    const GraphSet st = graph_of(completed_step());
    CHECK(st.segments.size() == 3);
    bool vertical = false;
    for (const auto& s : st.segments)
        vertical = vertical || (s.a.x == 0.5 && s.b.x == 0.5 && std::min(s.a.y, s.b.y) == 0.0 && std::max(s.a.y, s.b.y) == 1.0);
    CHECK(vertical);

    const GraphSet z = graph_of(PiecewiseFn::affine(0, 1, {0, 1}, {1, 1}));
    CHECK(z.bands.size() == 1);
    CHECK(z.segments.size() >= 2);
}

TEST_CASE("distance examples") {
    FnGen gen(3);
    for (int i = 0; i < 20; ++i) {
        const PiecewiseFn f = gen.general();
        CHECK(hausdorff_distance(f, f) == 0.0);
    }
    const PiecewiseFn one = PiecewiseFn::constant(0, 1, 1.0);
    CHECK(hausdorff_distance(zero(), one, Norm::euclid) == 1.0);
    CHECK(hausdorff_distance(zero(), one, Norm::max) == 1.0);
    const double d = hausdorff_distance(completed_step(), zero());
    CHECK(d == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(d - testing::sampled_hausdorff(completed_step(), zero(), Norm::euclid, 1e-4, 1e-4)) <= 1e-3);
    CHECK_THROWS_AS(hausdorff_distance(zero(), PiecewiseFn::constant(0, 2, 0.0)), std::invalid_argument);
}

TEST_CASE("bounds of the shifted band are distance 1 apart on (0, 1)") {
    const PiecewiseFn lo = PiecewiseFn::affine(0, 1, {0, 1});
    const PiecewiseFn up = PiecewiseFn::affine(0, 1, {1, 1});
    // (1, 2) on the upper graph is farthest: its perpendicular foot on y = x falls outside [0, 1].
    for (Norm n : {Norm::euclid, Norm::max}) {
        const DistanceBounds b = hausdorff_bounds(lo, up, n);
        CHECK(b.value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(b.upper_bound - b.value <= 1e-9);
        CHECK(std::abs(b.value - testing::sampled_hausdorff(lo, up, n, 1e-3, 1e-3)) <= 1e-6);
    }
}

TEST_CASE("bounds of H-continuous functions are at distance zero") {
    FnGen gen(8);
    for (int i = 0; i < 200; ++i) {
        const PiecewiseFn f = gen.h_continuous();
        CHECK(hausdorff_distance(lower_part(f), upper_part(f)) <= 1e-9);
    }
    const PiecewiseFn z = PiecewiseFn::affine(0, 1, {0, 1}, {1, 1});
    CHECK(hausdorff_distance(lower_part(z), upper_part(z)) > 0.5);
}

TEST_CASE("symmetry and triangle inequality") {
    FnGen gen(13);
    for (int i = 0; i < 60; ++i) {
        const PiecewiseFn f = gen.general(), g = gen.general(), h = gen.general();
        for (Norm n : {Norm::euclid, Norm::max}) {
            const double fg = hausdorff_distance(f, g, n), gf = hausdorff_distance(g, f, n);
            CHECK(fg == doctest::Approx(gf).epsilon(1e-12));
            CHECK(fg <= hausdorff_distance(f, h, n) + hausdorff_distance(h, g, n) + 1e-6);
            CHECK(fg >= 0.0);
        }
    }
}

TEST_CASE("agreement with dense sampling") {
    FnGen gen(21);
    const double step = 2e-3;
    for (int i = 0; i < 40; ++i) {
        const PiecewiseFn f = i % 2 ? gen.general() : gen.point_valued();
        const PiecewiseFn g = i % 3 ? gen.general() : gen.h_continuous();
        for (Norm n : {Norm::euclid, Norm::max}) {
            const DistanceBounds b = hausdorff_bounds(f, g, n);
            const double oracle = testing::sampled_hausdorff(f, g, n, step, step);
            CAPTURE(i);
            CHECK(b.value <= b.upper_bound);
            CHECK(b.upper_bound - b.value <= 1e-6);
            CHECK(std::abs(b.value - oracle) <= 2 * step);
        }
    }
}
