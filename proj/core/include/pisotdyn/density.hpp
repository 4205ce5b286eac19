#pragma once

#include "pisotdyn/maps.hpp"

#include <functional>
#include <vector>

namespace pisotdyn {

struct DensityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SampleOnBreakpoint : DensityError {
    using DensityError::DensityError;
};

/// Exact truncated value together with a certified radius covering the
/// discarded series tail.
struct DensityValue {
    FieldElement value;
    Rat tail;
};

/// Smallest truncation N with series tail 2/(beta^N (beta-1)) below eps.
unsigned default_truncation(const NumberField& field,
                            const Rat& eps = Rat(Int(1), Int(1000000000000LL)));

/// Invariant density of T(x) = {beta x}: h(x) proportional to
/// sum_{n >= 0, x < T^n(1)} beta^-n, normalized to integrate to 1.
struct ParryDensity {
    NumberField field;
    PLMap map;  // the beta map
    unsigned N = 0;
    std::vector<FieldElement> orbit_of_one;  // T^0(1) .. T^{N-1}(1)
    FieldElement normalizer;                 // F = sum T^n(1) beta^-n, exact truncation
    Rat series_tail;                         // unnormalized tail <= beta^-N/(beta-1)
};

ParryDensity parry_density_profile(const NumberField& field, unsigned N);
DensityValue eval_parry(const ParryDensity& p, const FieldElement& x);
/// One-shot convenience evaluator.
DensityValue parry_density(const NumberField& field, const FieldElement& x, unsigned N);

/// Invariant density of S_t from its one-sided orbits of the discontinuity.
/// The raw series h(x) = 1 + sum_{n>=1} (iota+(n) - iota-(n) + d_n(x) - 1)
/// beta^-n with d_n(x) = [x >= r_n] + [x < l_n] is a fixed point of the
/// transfer operator but does not integrate to 1 in general, so the stored
/// table divides it by its exact integral (the normalizer). The combined
/// series keeps every term in {-1,0,1} (tail 1/(beta^N(beta-1))) and
/// vanishes termwise for integer beta, making the integer calibration exact.
struct StDensityProfile {
    NumberField field;
    FieldElement t;
    PLMap map;  // S_t
    unsigned N = 0;
    std::vector<FieldElement> r, l;           // one-sided orbit values, 0..N
    std::vector<int> iota_plus, iota_minus;   // defined for n = 1..N (index 0 unused)
    FieldElement C;                           // constant of the raw series, canonical form
    FieldElement normalizer;                  // exact integral of the raw truncated series
    Rat c_tail;                               // <= 1/(beta^N(beta-1))
    Rat eval_tail;                            // certified radius for normalized h values
    std::vector<FieldElement> breakpoints;    // sorted, starts at 0, ends at 1
    std::vector<FieldElement> values;         // normalized h on [bp_i, bp_{i+1})
};

StDensityProfile st_profile(const NumberField& field, const FieldElement& t, unsigned N);
DensityValue eval_density(const StDensityProfile& p, const FieldElement& x);

/// Exact digit of the map: alpha(x) = beta*x - S(x), extended to one-sided
/// orbit values via consecutive orbit points.
struct DigitMachinery {
    NumberField field;
    PLMap map;
    std::vector<FieldElement> digits;   // D = {0..floor(beta)-1} union {beta-1}
    FieldElement r1, l1;
    std::vector<FieldElement> alpha_r;  // alpha(r_n) = beta r_n - r_{n+1}, n = 0..N-1
    std::vector<FieldElement> alpha_l;
};

DigitMachinery digit_machinery(const StDensityProfile& p);

/// The digit selector D(x) = {alpha(y) : y in S^-1(x)}, which realizes the
/// appendix region table for either ordering of r_1 and l_1.
std::vector<FieldElement> digit_selector(const DigitMachinery& m, const FieldElement& x);

/// (e_n+, e_n-) cardinalities with their correction terms; n in 1..N-1.
std::pair<Int, Int> e_terms(const DigitMachinery& m, const FieldElement& x, unsigned n);

/// Exact check of sum_{y in S^-1(x)} d_n(y) = e_n(x) + d_{n+1}(x).
bool key_equality(const DigitMachinery& m, const StDensityProfile& p, const FieldElement& x,
                  unsigned n);

/// max over samples of |(1/|S'|) sum_{y in S^-1(x)} h(y) - h(x)|, exact.
/// Samples must avoid the breakpoints.
using DensityFn = std::function<FieldElement(const FieldElement&)>;
FieldElement transfer_residual(const PLMap& map, const DensityFn& h,
                               const std::vector<FieldElement>& breakpoints,
                               const std::vector<FieldElement>& samples);
FieldElement transfer_residual(const StDensityProfile& p, const std::vector<FieldElement>& xs);
FieldElement transfer_residual(const ParryDensity& p, const std::vector<FieldElement>& xs);

/// Exact integral of the truncated density over [0,1], with tail radius.
DensityValue normalize_check(const StDensityProfile& p);
DensityValue normalize_check(const ParryDensity& p);

/// Scan of the value table against (beta-2)/(beta-1) <= h <= beta/(beta-1).
/// For beta < 2 the lower bound is vacuous; the scan instead flags
/// subintervals where the density is not certifiably positive.
struct BoundsReport {
    bool beta_at_least_two = false;
    FieldElement lower, upper;      // the two bound values
    FieldElement min_value, max_value;
    bool passed = false;
    std::vector<size_t> violations;  // indices of violating table intervals
};

BoundsReport bounds_check(const StDensityProfile& p);

/// |r_0 - sum_{n=1..N} alpha(r_{n-1}) beta^-n| and the l analog; both must
/// be below the returned certified tail.
struct ExpansionReport {
    FieldElement r_defect, l_defect;
    Rat tail;
    bool passed = false;
};

ExpansionReport expansion_identities(const StDensityProfile& p);

}  // namespace pisotdyn
