#pragma once

#include "pisotdyn/density.hpp"
#include "pisotdyn/discreteness.hpp"
#include "pisotdyn/orbits.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pisotdyn {

struct EquivalenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OffsetOutsideWindow : EquivalenceError {
    using EquivalenceError::EquivalenceError;
};
struct EmptyWindow : EquivalenceError {
    using EquivalenceError::EquivalenceError;
};

enum class Direction { Forward, Reverse };

/// Closed subinterval of [0,1] with exact endpoints.
struct Interval {
    FieldElement lo, hi;
    FieldElement length() const { return hi - lo; }
    bool contains(const FieldElement& x) const;
};

/// Canonical finite union of disjoint closed intervals.
struct IntervalUnion {
    std::vector<Interval> components;  // sorted, pairwise disjoint

    /// Sorts and merges overlapping or touching parts.
    static IntervalUnion make(std::vector<Interval> parts);
    FieldElement measure() const;
    bool contains(const FieldElement& x) const;
};

/// E = {+-b_i} union {0,...,floor(beta)} built from the intercepts of S.
DigitSet coupling_digits(const PLMap& S);
/// Certified superset enumeration of F_{E-E} intersected with [-1,2].
WindowEnumeration coupling_window(const PLMap& S);

/// Per-step record of the coupling between T-time and S-time. Forward:
/// k(n) is the cumulative slope exponent of S^n, and the offset
/// T^{k(n)}(x0) - eps*S^n(x0) must land in the window. Reverse:
/// k(n) = max{k : theta_k <= n}, j = n - theta_{k(n)} in [0,M), and the
/// offset S^{k(n)}(x0) - sigma*T^{n-j}(x0) must land in the window.
struct CouplingReport {
    Direction direction = Direction::Forward;
    unsigned M = 1;                     // max slope exponent of S
    std::vector<size_t> k;              // k(0..N)
    std::vector<unsigned> j;            // reverse only, aligned with k
    std::vector<FieldElement> offsets;  // exact window members, one per step
    std::vector<size_t> violations;     // steps violating the counting conditions
    size_t window_size = 0;
};

CouplingReport coupling_forward(const PLMap& T, const PLMap& S, const FieldElement& x0, size_t N,
                                const WindowEnumeration& window);
CouplingReport coupling_reverse(const PLMap& T, const PLMap& S, const FieldElement& x0, size_t N,
                                const WindowEnumeration& window);

/// Exact preimage of an interval union under one application of the map
/// (singleton branches contribute nothing).
IntervalUnion interval_preimage(const PLMap& T, const IntervalUnion& U);

/// The enlarged target set: union over window translates t of (I+t) and
/// (-I+t), clipped to [0,1]; the reverse direction additionally unions over
/// T^{-j}(I) for j = 0..M-1. Carries the exact covering-measure certificate.
struct TildeSet {
    IntervalUnion set;
    FieldElement measure;
    FieldElement bound;  // 2*Card(W)*lambda(I), times M*max_j lambda(T^-j I) reverse
    bool certificate_ok = false;
};

TildeSet tilde_set(const Interval& I, const std::vector<FieldElement>& window, unsigned M,
                   Direction direction, const PLMap& T);

/// Counts steps n <= N where the source orbit enters I but the coupled
/// target point misses tilde. Zero for a valid coupling.
size_t membership_implication_check(const PLMap& T, const PLMap& S, const FieldElement& x0,
                                    const CouplingReport& rep, const Interval& I,
                                    const IntervalUnion& tilde);

/// (#{n < N : orbit[n] in I}) / N, exact.
Rat birkhoff_frequency(const std::vector<FieldElement>& orbit, const Interval& I);

/// One-dimensional star discrepancy of the points against a monotone cdf.
double star_discrepancy(std::vector<double> points, const std::function<double(double)>& cdf);

/// Frequency of I over exact-orbit steps n in [n_begin, n_end), streaming.
Rat interval_frequency(const PLMap& map, const FieldElement& x0, size_t n_begin, size_t n_end,
                       const Interval& I);

/// Reference bin masses (integrals of the invariant density over equal bins).
std::vector<Rat> lebesgue_bin_masses(unsigned bins);
std::vector<Rat> parry_bin_masses(const ParryDensity& p, unsigned bins);
std::vector<Rat> profile_bin_masses(const StDensityProfile& p, unsigned bins);

/// Side-by-side occupation statistics of the two maps from one exact seed,
/// each compared against its own invariant measure, plus an exact coupling
/// summary over a short prefix.
struct GenericReport {
    std::string label_T, label_S;
    size_t N = 0;
    unsigned bins = 0;
    std::string seed;                 // decimal rendering of x0
    std::vector<Rat> hist_T, hist_S;  // occupation frequencies, each sums to 1
    std::vector<Rat> ref_T, ref_S;    // reference bin masses
    Rat sup_T, sup_S;                 // sup |hist - ref| over bins
    Rat max_ratio_T, max_ratio_S;     // observed max frequency/mass over bins
    unsigned M = 1;
    size_t coupling_N = 0;
    size_t coupling_violations = 0;  // both directions over coupling_N steps
};

GenericReport generic_report(const PLMap& T, const std::vector<Rat>& ref_T, const PLMap& S,
                             const std::vector<Rat>& ref_S, const FieldElement& x0, size_t N,
                             unsigned bins, size_t coupling_steps = 1000);

}  // namespace pisotdyn
