#pragma once

#include "pisotdyn/rational.hpp"

namespace pisotdyn {

/// Complex ball with exact Gaussian-rational center and exact rational radius.
/// All operations are outward-rounded: the result ball contains the image of
/// every point of the operand balls.
struct CBall {
    Rat re, im;   // center
    Rat rad = 0;  // radius (upper bound)

    CBall() = default;
    CBall(Rat r, Rat i, Rat rd = 0) : re(std::move(r)), im(std::move(i)), rad(std::move(rd)) {}
    static CBall from_real(const Rat& x) { return CBall(x, 0, 0); }
    static CBall from_interval(const RatInterval& iv) {
        return CBall(iv.mid(), 0, iv.width() / 2);
    }

    bool is_exact() const { return rad == 0; }

    /// Certified upper / lower bounds on |center|.
    Rat center_abs_upper() const { return sqrt_upper(re * re + im * im); }
    Rat center_abs_lower() const { return sqrt_lower(re * re + im * im); }

    /// Certified bounds on |z| over the ball.
    Rat abs_upper() const { return center_abs_upper() + rad; }
    Rat abs_lower() const {
        Rat l = center_abs_lower() - rad;
        return l < 0 ? Rat(0) : l;
    }

    CBall operator+(const CBall& o) const { return {re + o.re, im + o.im, rad + o.rad}; }
    CBall operator-(const CBall& o) const { return {re - o.re, im - o.im, rad + o.rad}; }
    CBall operator-() const { return {-re, -im, rad}; }

    CBall operator*(const CBall& o) const {
        // |z1 z2 - c1 c2| <= |c1| r2 + |c2| r1 + r1 r2
        Rat r = center_abs_upper() * o.rad + o.center_abs_upper() * rad + rad * o.rad;
        return {re * o.re - im * o.im, re * o.im + im * o.re, r};
    }

    CBall operator*(const Rat& c) const { return {re * c, im * c, rad * abs_rat(c)}; }

    /// Certified ball containing 1/z; the ball must exclude 0.
    CBall inverse() const {
        Rat cl = center_abs_lower();
        if (cl <= rad) throw std::domain_error("CBall::inverse: ball contains 0");
        Rat n2 = re * re + im * im;
        return {re / n2, -im / n2, rad / (cl * (cl - rad))};
    }

    CBall pow(unsigned n) const {
        CBall acc = from_real(1);
        CBall base = *this;
        unsigned k = n;
        while (k) {
            if (k & 1) acc = acc * base;
            base = base * base;
            k >>= 1;
        }
        return acc;
    }

    /// Shrink center representation to dyadics with `bits` fractional bits,
    /// growing the radius so the ball still contains the original one.
    CBall compressed(unsigned bits) const {
        Rat nre = dyadic_floor(re, bits), nim = dyadic_floor(im, bits);
        Rat err = sqrt_upper((re - nre) * (re - nre) + (im - nim) * (im - nim));
        return {nre, nim, dyadic_ceil(rad + err, bits)};
    }

    bool disjoint_from(const CBall& o) const {
        Rat dist = CBall{re - o.re, im - o.im, 0}.center_abs_lower();
        return dist > rad + o.rad;
    }
};

}  // namespace pisotdyn
