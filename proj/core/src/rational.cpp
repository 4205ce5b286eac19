#include "pisotdyn/rational.hpp"

#include <cctype>
#include <cmath>

namespace pisotdyn {

Int isqrt_floor(const Int& n) {
    if (n < 0) throw std::domain_error("isqrt_floor: negative argument");
    Int r;
    mpz_sqrt(r.backend().data(), n.backend().data());
    return r;
}

Rat sqrt_lower(const Rat& q, unsigned bits) {
    if (q < 0) throw std::domain_error("sqrt_lower: negative argument");
    if (q == 0) return 0;
    // sqrt(a/b) = sqrt(a*b)/b; scale by 4^bits for precision.
    Int a = rat_num(q), b = rat_den(q);
    Int scaled = a * b;
    scaled <<= 2 * bits;
    Int s = isqrt_floor(scaled);  // s <= sqrt(a*b)*2^bits
    return Rat(s, b << bits);
}

Rat sqrt_upper(const Rat& q, unsigned bits) {
    if (q < 0) throw std::domain_error("sqrt_upper: negative argument");
    if (q == 0) return 0;
    Int a = rat_num(q), b = rat_den(q);
    Int scaled = a * b;
    scaled <<= 2 * bits;
    Int s = isqrt_floor(scaled) + 1;  // s >= sqrt(a*b)*2^bits
    return Rat(s, b << bits);
}

Int floor_rat(const Rat& q) {
    Int n = rat_num(q), d = rat_den(q);
    Int r;
    mpz_fdiv_q(r.backend().data(), n.backend().data(), d.backend().data());
    return r;
}

Int ceil_rat(const Rat& q) {
    Int n = rat_num(q), d = rat_den(q);
    Int r;
    mpz_cdiv_q(r.backend().data(), n.backend().data(), d.backend().data());
    return r;
}

Rat abs_rat(const Rat& q) { return q < 0 ? Rat(-q) : q; }

Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("rat_from_double: non-finite value");
    Rat r;
    mpq_set_d(r.backend().data(), x);
    return r;
}

Rat dyadic_floor(const Rat& q, unsigned bits) {
    Int n = rat_num(q) << bits;
    Int d = rat_den(q);
    Int r;
    mpz_fdiv_q(r.backend().data(), n.backend().data(), d.backend().data());
    return Rat(r, Int(1) << bits);
}

Rat dyadic_ceil(const Rat& q, unsigned bits) {
    Int n = rat_num(q) << bits;
    Int d = rat_den(q);
    Int r;
    mpz_cdiv_q(r.backend().data(), n.backend().data(), d.backend().data());
    return Rat(r, Int(1) << bits);
}

RatInterval RatInterval::operator*(const RatInterval& o) const {
    Rat a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    Rat mn = a, mx = a;
    for (const Rat& v : {b, c, d}) {
        if (v < mn) mn = v;
        if (v > mx) mx = v;
    }
    return {mn, mx};
}

Rat parse_rational(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw std::invalid_argument("parse_rational: empty string");
    auto slash = t.find('/');
    if (slash != std::string::npos) {
        Int n(t.substr(0, slash)), d(t.substr(slash + 1));
        if (d == 0) throw std::invalid_argument("parse_rational: zero denominator");
        return Rat(n, d);
    }
    auto dot = t.find('.');
    if (dot == std::string::npos) return Rat(Int(t));
    std::string intpart = t.substr(0, dot), fracpart = t.substr(dot + 1);
    bool neg = !intpart.empty() && intpart[0] == '-';
    if (intpart == "-" || intpart == "+" || intpart.empty()) intpart += "0";
    Int ip(intpart);
    Int fp = fracpart.empty() ? Int(0) : Int(fracpart);
    Int den = 1;
    for (size_t i = 0; i < fracpart.size(); ++i) den *= 10;
    Rat r = Rat(abs(ip)) + Rat(fp, den);
    return neg || ip < 0 ? Rat(-r) : r;
}

std::string rat_to_string(const Rat& q) {
    if (rat_den(q) == 1) return rat_num(q).str();
    return rat_num(q).str() + "/" + rat_den(q).str();
}

std::string rat_to_decimal(const Rat& q, unsigned digits) {
    Rat a = abs_rat(q);
    Int scale = 1;
    for (unsigned i = 0; i < digits; ++i) scale *= 10;
    Int whole = floor_rat(a);
    Int frac = floor_rat((a - Rat(whole)) * Rat(scale));
    std::string fs = frac.str();
    while (fs.size() < digits) fs = "0" + fs;
    std::string out = whole.str();
    if (digits > 0) out += "." + fs;
    if (q < 0 && (whole != 0 || frac != 0)) out = "-" + out;
    return out;
}

}  // namespace pisotdyn
