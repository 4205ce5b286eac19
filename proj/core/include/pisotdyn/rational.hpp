#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace pisotdyn {

using Int = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                           boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                          boost::multiprecision::et_off>;

inline Int rat_num(const Rat& q) { return numerator(q); }
inline Int rat_den(const Rat& q) { return denominator(q); }

/// Floor of sqrt(n) for n >= 0.
Int isqrt_floor(const Int& n);

/// Rational lower/upper bounds for sqrt(q), q >= 0, accurate to about
/// `bits` fractional bits.
Rat sqrt_lower(const Rat& q, unsigned bits = 96);
Rat sqrt_upper(const Rat& q, unsigned bits = 96);

/// Largest dyadic k/2^bits <= q, and smallest >= q.
Rat dyadic_floor(const Rat& q, unsigned bits);
Rat dyadic_ceil(const Rat& q, unsigned bits);

Int floor_rat(const Rat& q);
Int ceil_rat(const Rat& q);

/// Exact rational value of a finite double.
Rat rat_from_double(double x);

Rat abs_rat(const Rat& q);

/// Parses "a/b", "a", or a decimal string like "-0.125" exactly.
Rat parse_rational(const std::string& s);

std::string rat_to_string(const Rat& q);

/// Decimal rendering with the given number of fractional digits
/// (round toward zero).
std::string rat_to_decimal(const Rat& q, unsigned digits);

/// Closed rational interval [lo, hi].
struct RatInterval {
    Rat lo, hi;

    RatInterval() = default;
    RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw std::invalid_argument("RatInterval: lo > hi");
    }

    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
    bool contains(const Rat& x) const { return lo <= x && x <= hi; }
    bool contains_zero() const { return lo <= 0 && 0 <= hi; }

    RatInterval operator+(const RatInterval& o) const { return {lo + o.lo, hi + o.hi}; }
    RatInterval operator-(const RatInterval& o) const { return {lo - o.hi, hi - o.lo}; }
    RatInterval operator*(const RatInterval& o) const;
    RatInterval operator+(const Rat& c) const { return {lo + c, hi + c}; }
    RatInterval operator*(const Rat& c) const {
        return c >= 0 ? RatInterval{lo * c, hi * c} : RatInterval{hi * c, lo * c};
    }

    /// Outward rounding to dyadics with `bits` fractional bits.
    RatInterval rounded(unsigned bits) const {
        return {dyadic_floor(lo, bits), dyadic_ceil(hi, bits)};
    }
};

}  // namespace pisotdyn
