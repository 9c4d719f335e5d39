#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjvisc/hamiltonian.hpp"
#include "hjvisc/pwfn.hpp"
#include "hjvisc/viscosity.hpp"

namespace hjvisc {

/// Interval-valued function sampled on N uniform nodes a = x_0 < ... < x_{N-1} = b.
/// The end nodes sit on the boundary of the open domain and hold limit values.
class GridFn {
public:
    GridFn(double a, double b, std::vector<Interval> values);

    double lo() const { return a_; }
    double hi() const { return b_; }
    std::size_t size() const { return values_.size(); }
    double spacing() const { return (b_ - a_) / static_cast<double>(values_.size() - 1); }
    double node(std::size_t i) const {
        return a_ + (b_ - a_) * static_cast<double>(i) / static_cast<double>(values_.size() - 1);
    }

    const Interval& operator[](std::size_t i) const { return values_[i]; }
    Interval& operator[](std::size_t i) { return values_[i]; }
    const std::vector<Interval>& values() const { return values_; }

    bool is_point_valued() const;
    friend bool operator==(const GridFn&, const GridFn&) = default;

private:
    double a_;
    double b_;
    std::vector<Interval> values_;
};

GridFn sample_to_grid(const PiecewiseFn& f, std::size_t n);

/// One-cell erosion of the lower values and dilation of the upper values.
GridFn discrete_envelopes(const GridFn& g);

/// Nodewise componentwise order within tol.
bool grid_leq(const GridFn& f, const GridFn& g, double tol = kDefaultTol);

enum class Mode { sub, super };

/// Discrete semidifferentials at interior node i from the one-sided difference
/// quotients s⁻, s⁺ of the upper (sub) or lower (super) values. Quotients
/// within tol of each other count as equal.
SlopeSet discrete_superdifferential(const GridFn& g, std::size_t i, double tol = kDefaultTol);
SlopeSet discrete_subdifferential(const GridFn& g, std::size_t i, double tol = kDefaultTol);

VerificationReport discrete_verify(const GridFn& g, const Hamiltonian& h, Mode mode, const SampleConfig& cfg = {});

/// Postconditions of one bump, checked on the grid.
struct BumpChecks {
    bool upper_still_subsolution = false;
    bool raised_everywhere = false;  // w ≥ g
    bool changed = false;            // w ≠ g
    bool unchanged_outside_ball = false;
    bool lower_capped = false;  // lower(w) ≤ max(lower(g), lower_y + δ) in the ball
    bool all() const {
        return upper_still_subsolution && raised_everywhere && changed && unchanged_outside_ball && lower_capped;
    }
};

struct BumpResult {
    GridFn w;
    double delta = 0.0;   // requested height after retries
    double radius = 0.0;  // radius after retries
    double witness = 0.0; // slope p at which the supersolution test failed
    double phi = 0.0;     // Φ(y, lower_y, p)
    std::size_t retries = 0;
    BumpChecks checks;
};

/// Raise g near node y with the cap lower_y + δ' + p·(x − y) − |x − y|²/r,
/// δ' ≤ δ chosen so the cap never exceeds lower_y + δ inside the ball. When the raised
/// upper values stop being a subsolution both δ and r are halved, up to max_retries times.
/// Throws std::invalid_argument when the supersolution test passes at y.
BumpResult bump(const GridFn& g, std::size_t y, double delta, double radius, const Hamiltonian& h,
                const SampleConfig& cfg = {}, std::size_t max_retries = 20);

struct SolveConfig {
    double residual_tol = kDefaultTol;
    std::size_t max_iters = 200000;
    std::size_t max_retries = 20;
    /// Keep every k-th iterate in the trace (0 keeps none).
    std::size_t snapshot_every = 0;
    SampleConfig sample{kDefaultTol, 1e3, 41, 0, 0};
};

struct TraceRecord {
    enum class Kind { bump, rejected, stalled, sweep };
    Kind kind = Kind::bump;
    std::size_t node = 0;
    double x = 0.0;
    double delta = 0.0;
    double radius = 0.0;
    double witness = 0.0;
    double phi = 0.0;
    Interval before;
    Interval after;
    std::size_t raised = 0;
    BumpChecks checks;
};

std::string to_string(TraceRecord::Kind kind);

struct SolveTrace {
    std::vector<TraceRecord> records;
    std::vector<GridFn> snapshots;
    std::string termination;
    std::size_t iterations = 0;
    std::size_t bumps = 0;
    std::size_t rejected = 0;
    std::size_t sweeps = 0;
    bool monotone = true;
    double sub_residual = 0.0;    // max(Φ) over discrete sub sites of the result
    double super_residual = 0.0;  // max(−Φ) over discrete super sites of the result
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, SolveTrace trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}
    const SolveTrace& trace() const { return trace_; }

private:
    SolveTrace trace_;
};

struct SolveResult {
    GridFn u;
    SolveTrace trace;
};

/// Perron construction of a solution u with u1 ≤ u ≤ u2 on an N-node grid.
///
/// Requires u1, u2 H-continuous, upper(u1) a subsolution, lower(u2) a
/// supersolution and u1 ≤ u2. Starting from the sampled u1, the loop bumps the
/// worst node failing the discrete supersolution test; bumps that would rise
/// above the sampled u2 are retried with halved δ and eventually stalled. Once
/// no bump applies, a sweep raises every node as far as the discrete
/// subsolution property and u2 allow, so the iterate approaches the largest
/// member of the family instead of stopping at the first solution reached.
SolveResult perron_solve(const Hamiltonian& h, const PiecewiseFn& u1, const PiecewiseFn& u2, std::size_t n,
                         const SolveConfig& cfg = {});

}  // namespace hjvisc
