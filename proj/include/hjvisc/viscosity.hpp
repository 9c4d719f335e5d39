#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hjvisc/hamiltonian.hpp"
#include "hjvisc/pwfn.hpp"

namespace hjvisc {

/// Set of slopes p of C¹ test functions touching a graph at one point.
/// Half-lines and the whole line arise at jumps and isolated spikes.
struct SlopeSet {
    enum class Kind { empty, point, interval, half_line_up, half_line_down, whole_line };

    Kind kind = Kind::empty;
    double lo = 0.0;  // point, interval, half_line_up
    double hi = 0.0;  // point, interval, half_line_down

    static SlopeSet empty() { return {}; }
    static SlopeSet point(double p) { return {Kind::point, p, p}; }
    static SlopeSet interval(double lo, double hi);
    static SlopeSet at_least(double lo) { return {Kind::half_line_up, lo, lo}; }
    static SlopeSet at_most(double hi) { return {Kind::half_line_down, hi, hi}; }
    static SlopeSet whole_line() { return {Kind::whole_line, 0.0, 0.0}; }

    bool contains(double p) const;
    bool is_unbounded() const {
        return kind == Kind::half_line_up || kind == Kind::half_line_down || kind == Kind::whole_line;
    }
    friend bool operator==(const SlopeSet&, const SlopeSet&) = default;
};

std::string to_string(SlopeSet::Kind kind);

struct SampleConfig {
    double tol = kDefaultTol;
    /// Unbounded slope sets are sampled inside [-p_max, p_max].
    double p_max = 1e3;
    std::size_t samples = 41;
    /// Random interior points added per piece on top of breakpoints and midpoints.
    std::size_t extra = 32;
    std::uint64_t seed = 0;
};

/// Slopes at which Φ is evaluated: endpoints and midpoint of bounded sets, an
/// evenly spaced grid of cfg.samples points for the clipped unbounded ones.
std::vector<double> slope_samples(const SlopeSet& s, const SampleConfig& cfg);

/// D⁺f(x) for point-valued upper semicontinuous f. Throws if f is interval
/// valued or not upper semicontinuous at x.
SlopeSet superdifferential(const PiecewiseFn& f, double x, double tol = kDefaultTol);
/// D⁻f(x) for point-valued lower semicontinuous f.
SlopeSet subdifferential(const PiecewiseFn& f, double x, double tol = kDefaultTol);

/// One tested (x, p) pair. For sup/inf equality checks `p` is NaN and `phi`
/// holds the family value compared against u(x).
struct SiteCheck {
    double x = 0.0;
    double u = 0.0;
    double p = 0.0;
    double phi = 0.0;
    bool pass = true;
    std::string role;
};

/// An unbounded slope set that was only sampled on [-p_max, p_max].
struct Truncation {
    double x = 0.0;
    SlopeSet set;
    double p_max = 0.0;
    std::size_t samples = 0;
    std::string role;
};

struct VerificationReport {
    bool verdict = true;
    std::vector<SiteCheck> sites;
    std::vector<Truncation> truncations;
    std::vector<std::string> notes;
    double tolerance = kDefaultTol;
    std::uint64_t seed = 0;

    std::size_t failures() const;
    void absorb(VerificationReport other);
};

/// Points at which verifiers evaluate: every interior breakpoint, every piece
/// midpoint and cfg.extra seeded random points per piece, sorted.
std::vector<double> check_points(std::span<const double> breakpoints, const SampleConfig& cfg);

VerificationReport verify_subsolution(const PiecewiseFn& f, const Hamiltonian& h, const SampleConfig& cfg = {});
VerificationReport verify_supersolution(const PiecewiseFn& f, const Hamiltonian& h, const SampleConfig& cfg = {});

/// S-continuous f: lower bound must be a supersolution, upper bound a subsolution.
VerificationReport verify_interval_solution(const PiecewiseFn& f, const Hamiltonian& h, const SampleConfig& cfg = {});

/// u equals the pointwise sup of the subsolutions z1 and the pointwise inf of
/// the supersolutions z2. Only the given finite families and finitely many
/// sites are checked.
VerificationReport verify_envelope_solution(const PiecewiseFn& u, std::span<const PiecewiseFn> z1,
                                            std::span<const PiecewiseFn> z2, const Hamiltonian& h,
                                            const SampleConfig& cfg = {});

}  // namespace hjvisc
