#pragma once

#include "pisotdyn/cball.hpp"
#include "pisotdyn/rational.hpp"

#include <memory>
#include <string>
#include <vector>

namespace pisotdyn {

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotMonic : FieldError {
    using FieldError::FieldError;
};
struct Reducible : FieldError {
    using FieldError::FieldError;
};
struct IrreducibilityUndecided : FieldError {
    using FieldError::FieldError;
};
struct NoRootInInterval : FieldError {
    using FieldError::FieldError;
};
struct RootNotGreaterThanOne : FieldError {
    using FieldError::FieldError;
};
struct FieldMismatch : FieldError {
    using FieldError::FieldError;
};
struct DivisionByZero : FieldError {
    using FieldError::FieldError;
};
struct RefinementBudgetExceeded : FieldError {
    using FieldError::FieldError;
};

enum class BetaClass { Pisot, PerronOnly, Neither, Undecided };

std::string to_string(BetaClass c);

/// A real algebraic integer beta > 1 presented by its monic irreducible
/// minimal polynomial, an isolating rational interval for the distinguished
/// real root, and certified complex discs around all Galois conjugates.
///
/// The handle is a cheap shared reference. Enclosures and conjugate discs are
/// refined lazily; refinement is monotone (discs only shrink) so observed
/// values are immutable facts about the field.
class NumberField {
  public:
    /// Empty handle; usable only as a target of assignment.
    NumberField() = default;

    /// Builds a field from a monic integer polynomial (coefficients in
    /// ascending order, a0..ad) and an isolating interval for a real
    /// root > 1. Verifies irreducibility.
    static NumberField make(std::vector<Int> min_poly, RatInterval root_hint);

    int degree() const;
    const std::vector<Int>& min_poly() const;

    /// Isolating interval of the distinguished root, width <= max_width.
    RatInterval root_enclosure(const Rat& max_width) const;

    /// Certified disc around the i-th conjugate (0-based over all d roots),
    /// radius <= max_radius. Discs are pairwise disjoint.
    CBall conjugate(size_t i, const Rat& max_radius) const;

    size_t distinguished_index() const;

    /// Indices of the non-distinguished conjugates.
    std::vector<size_t> other_conjugates() const;

    bool same_as(const NumberField& o) const;

    bool is_trivial() const { return degree() == 1; }

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
    explicit NumberField(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
    friend class FieldElement;  // fixed-point fast paths for sign/floor
};

/// Pisot / Perron classification by refining conjugate discs until each lies
/// strictly inside or outside the unit circle (and, if needed, strictly
/// below the distinguished root in modulus). `refine_budget` bounds the
/// number of halving rounds; symmetric polynomials (p(-x) = +-p(x)) are
/// resolved exactly before refinement.
BetaClass classify(const NumberField& field, unsigned refine_budget = 128);

/// An element of Q(beta) as exact rational coordinates in the power basis
/// 1, beta, ..., beta^{d-1}. Canonical: equality is coordinate equality.
class FieldElement {
  public:
    FieldElement() = default;
    FieldElement(NumberField field, std::vector<Rat> coords);

    static FieldElement rational(const NumberField& field, Rat value);
    static FieldElement integer(const NumberField& field, Int value) {
        return rational(field, Rat(std::move(value)));
    }
    /// The distinguished root as an element (exact for degree-1 fields).
    static FieldElement beta(const NumberField& field);

    const NumberField& field() const { return field_; }
    const std::vector<Rat>& coords() const { return coords_; }

    bool is_zero() const;
    bool is_rational() const;
    Rat as_rational() const;  // throws unless is_rational()

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
    FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

    FieldElement operator*(const Rat& c) const;
    FieldElement operator+(const Rat& c) const;
    FieldElement operator-(const Rat& c) const;

    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    /// Exact sign of the distinguished real embedding.
    int sign() const;
    bool operator<(const FieldElement& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const FieldElement& o) const { return (*this - o).sign() <= 0; }
    bool operator>(const FieldElement& o) const { return (*this - o).sign() > 0; }
    bool operator>=(const FieldElement& o) const { return (*this - o).sign() >= 0; }

    Int floor() const;
    FieldElement frac() const;
    FieldElement abs() const { return sign() >= 0 ? *this : -(*this); }

    /// Certified interval around the distinguished embedding.
    RatInterval enclosure(const Rat& max_width) const;
    /// Certified disc around the i-th conjugate embedding phi_i(x).
    CBall embedding(size_t i, const Rat& max_radius) const;

    /// Smallest positive integer L with L*x having integer coordinates.
    Int coordinate_denominator() const;

    /// Canonical key, usable for hashing / set membership.
    std::string key() const;
    std::string to_string() const;
    /// Decimal approximation, round toward zero at `digits` fractional digits.
    std::string to_decimal(unsigned digits = 12) const;
    double to_double() const;

  private:
    NumberField field_;
    std::vector<Rat> coords_;
    void check_same_field(const FieldElement& o) const;
};

inline FieldElement operator*(const Rat& c, const FieldElement& x) { return x * c; }

/// Certified rational upper bounds A_i on max_{e in E} |phi_i(e)| for each
/// non-distinguished conjugate, in `other_conjugates()` order.
std::vector<Rat> conjugate_bound(const NumberField& field, const std::vector<FieldElement>& E);

/// Certified bounds C_j such that every x with |phi_k(x)| <= embedding_bounds[k]
/// for all conjugates k (0..d-1) has |coordinate j| <= C_j in the power basis.
/// Computed by inverting the embedding matrix in ball arithmetic.
std::vector<Rat> coordinate_bounds(const NumberField& field,
                                   const std::vector<Rat>& embedding_bounds);

}  // namespace pisotdyn
