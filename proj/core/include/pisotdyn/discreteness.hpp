#pragma once

#include "pisotdyn/numberfield.hpp"

#include <optional>
#include <vector>

namespace pisotdyn {

struct DiscretenessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotPisot : DiscretenessError {
    using DiscretenessError::DiscretenessError;
};
struct GapViolation : DiscretenessError {
    using DiscretenessError::DiscretenessError;
};

/// A finite digit set E together with the minimal L such that L*E lies in
/// Z[beta]. Elements are deduplicated and sorted.
struct DigitSet {
    NumberField field;
    std::vector<FieldElement> elements;
    Int L = 1;

    static DigitSet make(NumberField field, std::vector<FieldElement> elements);
    /// The difference set E - E (always contains 0).
    DigitSet difference() const;
    bool contains(const FieldElement& x) const;
};

enum class EnumMethod { LatticeBox, DigitBfs };

/// Elements of (a superset of) F_E meeting an exact window [lo, hi].
struct WindowEnumeration {
    FieldElement lo, hi;
    std::vector<FieldElement> elements;  // sorted ascending
    EnumMethod method = EnumMethod::LatticeBox;
    bool is_superset = true;
};

/// Certified positive R below L^-d * prod_i (1-|beta^(i)|)/A_i: nonzero
/// elements of F_{E-E} have modulus > R (factors with A_i = 0 are skipped;
/// for E = {0} the bound is the vacuous 1/L^d). Requires 0 in E.
Rat separation_bound(const DigitSet& diff);

/// LatticeBox: certified superset of F_E in the window, by scanning the
/// integer coordinate box implied by the conjugate bounds. DigitBfs: exact
/// finite digit sums sum d_j beta^j reached by breadth-first search with
/// conjugate pruning; every element is genuine.
WindowEnumeration enumerate_window(const DigitSet& E, const FieldElement& lo,
                                   const FieldElement& hi,
                                   EnumMethod method = EnumMethod::LatticeBox);

struct GapReport {
    size_t count = 0;
    std::optional<FieldElement> min_gap;  // empty means vacuous (fewer than 2 points)
    bool passed = true;
};

/// Checks all pairwise distances against R (> by default, >= with
/// strict=false). Throws GapViolation on failure.
GapReport verify_min_gap(const WindowEnumeration& e, const Rat& R, bool strict = true);

}  // namespace pisotdyn
