#pragma once

#include "pisotdyn/io.hpp"

#include <random>

namespace testutil {

using namespace pisotdyn;

inline NumberField golden_field() {
    return NumberField::make({Int(-1), Int(-1), Int(1)}, RatInterval(Rat(1), Rat(2)));
}

// beta = (3+sqrt 5)/2, root of x^2 - 3x + 1
inline NumberField silver_field() {
    return NumberField::make({Int(1), Int(-3), Int(1)}, RatInterval(Rat(2), Rat(3)));
}

inline NumberField integer_field(int n) {
    return NumberField::make({Int(-n), Int(1)}, RatInterval(Rat(1), Rat(n + 1)));
}

// plastic number, root of x^3 - x - 1
inline NumberField plastic_field() {
    return NumberField::make({Int(-1), Int(-1), Int(0), Int(1)}, RatInterval(Rat(1), Rat(2)));
}

inline FieldElement frat(const NumberField& f, long n, long d = 1) {
    return FieldElement::rational(f, Rat(n, d));
}

/// Uniform element of Q(beta) cap [0,1] with coordinate numerators and
/// denominators bounded by `height`, by rejection.
inline FieldElement random_unit_element(const NumberField& f, std::mt19937_64& rng,
                                        long height = 100) {
    std::uniform_int_distribution<long> num(-height, height), den(1, height);
    for (;;) {
        std::vector<Rat> coords;
        for (int i = 0; i < f.degree(); ++i) coords.emplace_back(num(rng), den(rng));
        FieldElement x(f, std::move(coords));
        if (x.sign() >= 0 && (x - FieldElement::rational(f, 1)).sign() <= 0) return x;
    }
}

}  // namespace testutil
