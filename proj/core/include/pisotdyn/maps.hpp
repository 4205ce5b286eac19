#pragma once

#include "pisotdyn/numberfield.hpp"

#include <string>
#include <utility>
#include <vector>

namespace pisotdyn {

struct MapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PartitionGap : MapError {
    using MapError::MapError;
};
struct PartitionOverlap : MapError {
    using MapError::MapError;
};
struct ImageEscapes : MapError {
    using MapError::MapError;
};
struct OutOfDomain : MapError {
    using MapError::MapError;
};
struct NoSidedNeighborhood : MapError {
    using MapError::MapError;
};
struct LengthMismatch : MapError {
    using MapError::MapError;
};
struct BadIdentity : MapError {
    using MapError::MapError;
};
struct BadArrangement : MapError {
    using MapError::MapError;
};
struct TOutOfRange : MapError {
    using MapError::MapError;
};
struct BetaOutOfRange : MapError {
    using MapError::MapError;
};

enum class Side { Left, Right };

/// One affine piece x -> epsilon * beta^m * x + b on an interval of [0,1].
struct Branch {
    FieldElement left, right;
    bool left_closed = true, right_closed = false;
    int epsilon = 1;
    unsigned m = 1;
    FieldElement b;
    FieldElement slope;  // epsilon * beta^m, filled in by PLMap::build

    bool is_singleton() const { return left == right; }
    bool contains(const FieldElement& x) const;
    FieldElement image(const FieldElement& x) const { return slope * x + b; }
};

/// A piecewise linear map on an exact partition of [0,1]. Immutable after
/// build; apply() and friends are pure.
class PLMap {
  public:
    PLMap() = default;

    /// Validates that the branch intervals tile [0,1] exactly and that every
    /// branch image stays inside [0,1].
    static PLMap build(NumberField field, std::vector<Branch> branches, std::string label);

    const NumberField& field() const { return field_; }
    const std::vector<Branch>& branches() const { return branches_; }
    const std::string& label() const { return label_; }
    unsigned max_m() const;

    /// Exact image and owning branch index.
    std::pair<FieldElement, size_t> apply(const FieldElement& x) const;
    size_t branch_index(const FieldElement& x) const;

    /// Applies the branch owning the chosen one-sided neighborhood of x.
    /// The returned side flips iff the branch slope is negative.
    struct SidedResult {
        FieldElement value;
        Side side;
        size_t branch;
    };
    SidedResult apply_one_sided(const FieldElement& x, Side side) const;

    /// All exact preimages of x, with their branch indices.
    std::vector<std::pair<FieldElement, size_t>> preimages(const FieldElement& x) const;

    std::vector<FieldElement> intercepts() const;

  private:
    NumberField field_;
    std::vector<Branch> branches_;
    std::string label_;
};

/// Cumulative affine form of S^n near a point: sign * beta^theta * x + intercept.
struct AffineForm {
    int sign = 1;
    unsigned theta = 0;
    FieldElement intercept;

    FieldElement eval(const FieldElement& x0) const;
    /// Extends the form by one application of the given branch.
    void extend(const Branch& br);
};

AffineForm affine_form(const PLMap& map, const FieldElement& x0, unsigned n);

// --- constructors ----------------------------------------------------------

/// T(x) = {beta x}: floor(beta)+1 branches, the last one closed at 1
/// (degenerate singleton when beta is an integer, so T(1) = 0).
PLMap beta_map(const NumberField& field);

/// Radix-r map with per-digit flips s (s_i = 1 flips branch i); 1 -> 0.
PLMap flip_radix_map(int r, const std::vector<int>& s);

/// The two reference pairs: (T1, S1) with slopes 2/4 and (T2, S2) over the
/// golden field.
std::pair<PLMap, PLMap> kn_pair(int which);

/// All nonnegative integer vectors (a_1..a_l), l <= max_l, entries <= max_coeff,
/// a_l != 0, with 1 = sum a_i beta^{-i} (verified exactly).
std::vector<std::vector<Int>> handelman_search(const NumberField& field, unsigned max_l,
                                               const Int& max_coeff);

/// Builds a map from a Handelman identity: `arrangement` lists the exponent i
/// of each piece (length beta^{-i}) from left to right; each piece carries
/// slope signs[k] * beta^i and maps onto [0,1] with all discontinuities sent
/// to {0,1}.
PLMap handelman_map(const NumberField& field, const std::vector<Int>& vec,
                    const std::vector<unsigned>& arrangement, const std::vector<int>& signs);

/// The one-parameter family S_t; for integer beta (t = 0) this coincides with
/// beta_map including the 1 -> 0 convention.
PLMap st_map(const NumberField& field, const FieldElement& t);

/// Locally flipped beta map for 1 < beta < sqrt(2): -beta x + 1 on [0,1/beta),
/// beta x - 1 on [1/beta,1]. Its invariant density vanishes on a subinterval.
PLMap flipped_beta_counterexample(const NumberField& field);

/// alpha(x) = beta*x - S(x) for x in [0,1).
FieldElement digit_alpha(const PLMap& map, const FieldElement& x);

/// The digit set D = {0,...,floor(beta)-1} union {beta-1} (duplicates merged
/// for integer beta).
std::vector<FieldElement> digit_set(const NumberField& field);

}  // namespace pisotdyn
