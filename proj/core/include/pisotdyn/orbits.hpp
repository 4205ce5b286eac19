#pragma once

#include "pisotdyn/maps.hpp"

#include <functional>
#include <vector>

namespace pisotdyn {

struct OrbitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetExceeded : OrbitError {
    Int lattice_bound;  // a-priori bound on distinct orbit points; 0 if unavailable
    BudgetExceeded(const std::string& msg, Int bound)
        : OrbitError(msg), lattice_bound(std::move(bound)) {}
};
struct PrecisionExhausted : OrbitError {
    using OrbitError::OrbitError;
};
struct EmptyOrbit : OrbitError {
    using OrbitError::OrbitError;
};

/// Exact orbit segment: points[h+1] = map(points[h]), with branch itinerary
/// and the cumulative slope exponents theta[h] (theta[0] = 0).
struct ExactOrbit {
    std::vector<FieldElement> points;
    std::vector<size_t> itinerary;
    std::vector<unsigned> theta;
};

ExactOrbit iterate_exact(const PLMap& map, const FieldElement& x0, size_t n);

/// Exact witness of eventual periodicity: S^p(x0) = S^{p+q}(x0), p and q minimal.
struct PeriodicityCertificate {
    size_t preperiod = 0;
    size_t period = 1;
    FieldElement witness;  // the orbit point at index preperiod
    size_t steps_used = 0;
};

/// Finds the certificate by hashing canonical coordinates. Throws
/// BudgetExceeded (carrying the a-priori lattice bound, when computable)
/// if no repeat occurs within step_budget.
PeriodicityCertificate detect_eventual_period(const PLMap& map, const FieldElement& x0,
                                              size_t step_budget);

/// A-priori bound on the number of distinct orbit points of x0: the orbit
/// lives in (1/L)*Z[beta] inside a fixed box of the Minkowski embedding.
/// Returns 0 when no finite bound applies (some conjugate of beta has
/// modulus >= 1).
Int lattice_point_bound(const PLMap& map, const FieldElement& x0);

/// Enclosure orbit: honest interval iteration at fixed dyadic precision.
/// valid_prefix counts the steps before branch membership became ambiguous.
struct NumericOrbit {
    std::vector<RatInterval> points;
    std::vector<size_t> itinerary;
    size_t valid_prefix = 0;
    unsigned bits = 0;  // working precision of the accepted run
};

/// A refinable seed: returns an enclosure of x0 of width about 2^-bits.
using SeedFn = std::function<RatInterval(unsigned bits)>;

/// Iterates the interval enclosure of the seed for n steps. With auto_raise,
/// the precision doubles (and the run restarts from a tighter seed) until
/// valid_prefix = n or max_bits is hit, then throws PrecisionExhausted.
NumericOrbit iterate_numeric(const PLMap& map, const SeedFn& seed, size_t n,
                             unsigned working_precision, bool auto_raise = true,
                             unsigned max_bits = 1u << 20);
NumericOrbit iterate_numeric(const PLMap& map, const Rat& x0, size_t n,
                             unsigned working_precision, bool auto_raise = true,
                             unsigned max_bits = 1u << 20);

/// Equal-width bins over [0,1]; bin edges go right, the last bin is closed.
/// Frequencies sum to 1.
std::vector<double> occupation_histogram(const std::vector<FieldElement>& points, size_t bins);
std::vector<double> occupation_histogram(const std::vector<double>& points, size_t bins);

}  // namespace pisotdyn
