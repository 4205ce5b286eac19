#pragma once

#include "pisotdyn/equivalence.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pisotdyn {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Isolating interval for the largest real root of a monic integer
/// polynomial (ascending coefficients), found by scanning below the Cauchy
/// bound and bisecting to width 1/1024.
RatInterval bracket_largest_root(const std::vector<Int>& coeffs);

/// Field spec: "poly=c0,c1,...,cd" with optional ";root=lo:hi" isolating
/// interval (defaults to the largest real root).
NumberField parse_field(const std::string& spec);
std::string emit_field(const NumberField& field);

/// Exact coordinates in the power basis, colon separated: "n/d:n/d:...".
std::string fe_coords(const FieldElement& x);
FieldElement parse_fe(const NumberField& field, const std::string& coords);

/// Map spec forms:
///   "beta"                                     the beta map
///   "st:<t coords>"                            the S_t family member
///   "flipped"                                  the flipped-beta counterexample
///   "handelman:vec=..;arr=..;signs=.."         Handelman partition map
///   "branches:l=..|r=..|lc=.|rc=.|eps=.|m=.|b=..;..."  explicit branches
/// emit_map writes the explicit form; it re-parses to an equal map.
PLMap parse_map(const NumberField& field, const std::string& spec);
std::string emit_map(const PLMap& map);

/// Deterministic rational seed a/q in [0,1) with q odd of the given bit
/// size, from a recorded 64-bit PRNG state.
Rat seed_rational(std::uint64_t state, unsigned bits = 512);

// JSON artifacts (deterministic key order; exact values as strings)
std::string coupling_json(const CouplingReport& rep);
std::string generic_json(const GenericReport& rep);
std::string gap_json(const GapReport& rep, const Rat& bound);
std::string density_table_json(const StDensityProfile& p);
std::string certificate_json(const PeriodicityCertificate& c);

// CSV artifacts
std::string histogram_csv(const std::vector<Rat>& hist, const std::vector<Rat>& ref);
std::string density_csv(const std::vector<FieldElement>& breakpoints,
                        const std::vector<FieldElement>& values);
std::string orbit_csv(const std::vector<FieldElement>& points);

void write_file(const std::string& path, const std::string& content);

}  // namespace pisotdyn
