#include "helpers.hpp"

#include <doctest.h>

using namespace pisotdyn;
using namespace testutil;

TEST_CASE("field construction certifies root and conjugates") {
    NumberField g = golden_field();
    CHECK(g.degree() == 2);
    RatInterval root = g.root_enclosure(Rat(1, 10000));
    CHECK(root.lo > Rat(16179, 10000));
    CHECK(root.hi < Rat(16181, 10000));
    CBall conj = g.conjugate(g.other_conjugates()[0], Rat(1, 10000));
    CHECK(conj.re < Rat(-617, 1000));
    CHECK(conj.re > Rat(-619, 1000));
    CHECK(conj.im == 0);

    NumberField two = integer_field(2);
    CHECK(two.degree() == 1);
    CHECK(two.other_conjugates().empty());
    CHECK(FieldElement::beta(two).as_rational() == 2);

    NumberField s = silver_field();
    RatInterval sroot = s.root_enclosure(Rat(1, 10000));
    CHECK(sroot.lo > Rat(26179, 10000));
    CBall sconj = s.conjugate(s.other_conjugates()[0], Rat(1, 10000));
    CHECK(sconj.re > Rat(381, 1000));
    CHECK(sconj.re < Rat(383, 1000));
}

TEST_CASE("field construction rejects bad input") {
    CHECK_THROWS_AS(NumberField::make({Int(-1), Int(-1), Int(2)}, RatInterval(Rat(1), Rat(2))),
                    NotMonic);
    CHECK_THROWS_AS(NumberField::make({Int(-1), Int(0), Int(1)}, RatInterval(Rat(0), Rat(2))),
                    Reducible);
    CHECK_THROWS_AS(NumberField::make({Int(-1), Int(-1), Int(1)}, RatInterval(Rat(3), Rat(4))),
                    NoRootInInterval);
    CHECK_THROWS_AS(NumberField::make({Int(-1), Int(1)}, RatInterval(Rat(0), Rat(2))),
                    RootNotGreaterThanOne);
}

TEST_CASE("classification of the stock examples") {
    CHECK(classify(golden_field()) == BetaClass::Pisot);
    CHECK(classify(silver_field()) == BetaClass::Pisot);
    CHECK(classify(plastic_field()) == BetaClass::Pisot);
    NumberField sqrt2 = NumberField::make({Int(-2), Int(0), Int(1)}, RatInterval(Rat(1), Rat(2)));
    CHECK(classify(sqrt2) == BetaClass::Neither);
    for (int n = 2; n <= 10; ++n) CHECK(classify(integer_field(n)) == BetaClass::Pisot);
}

TEST_CASE("field arithmetic reduces modulo the minimal polynomial") {
    NumberField g = golden_field();
    FieldElement beta = FieldElement::beta(g);
    FieldElement one = frat(g, 1);

    // beta^2 = beta + 1
    CHECK(beta * beta == beta + one);
    CHECK((beta * beta).coords() == std::vector<Rat>{Rat(1), Rat(1)});
    // (beta - 1) * beta = 1
    CHECK((beta - one) * beta == one);
    FieldElement x(g, {Rat(3, 7), Rat(-2, 5)});
    CHECK(x + frat(g, 0) == x);
    CHECK(x / x == one);
    CHECK_THROWS_AS(x / frat(g, 0), DivisionByZero);
    CHECK_THROWS_AS(x + frat(silver_field(), 1), FieldMismatch);
}

TEST_CASE("sign, floor and frac are exact") {
    NumberField g = golden_field();
    FieldElement beta = FieldElement::beta(g);
    CHECK(beta.frac() == beta - frat(g, 1));
    CHECK(beta.frac().coords() == std::vector<Rat>{Rat(-1), Rat(1)});
    CHECK((beta * beta - beta - frat(g, 1)).sign() == 0);
    CHECK(FieldElement::beta(silver_field()).floor() == 2);
    CHECK((-beta).sign() == -1);
    CHECK(beta.floor() == 1);
}

TEST_CASE("conjugate bounds certify embedded moduli") {
    NumberField g = golden_field();
    std::vector<Rat> a = conjugate_bound(g, {frat(g, 0), frat(g, 1), frat(g, -1)});
    REQUIRE(a.size() == 1);
    CHECK(a[0] >= 1);
    CHECK(a[0] < Rat(101, 100));

    a = conjugate_bound(g, {FieldElement::beta(g)});
    CHECK(a[0] >= Rat(618, 1000));
    CHECK(a[0] < Rat(62, 100));

    a = conjugate_bound(g, {frat(g, 0)});
    CHECK(a[0] == 0);
}

TEST_CASE("canonicality under random arithmetic") {
    NumberField g = golden_field();
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        FieldElement x = random_unit_element(g, rng), y = random_unit_element(g, rng);
        CHECK((x + y - y).coords() == x.coords());
        if (!y.is_zero()) CHECK(((x * y) / y).coords() == x.coords());
    }
}

TEST_CASE("signs agree with refined enclosures") {
    NumberField s = silver_field();
    std::mt19937_64 rng(8);
    for (int i = 0; i < 30; ++i) {
        FieldElement x = random_unit_element(s, rng) - frat(s, 1, 2);
        RatInterval e = x.enclosure(Rat(1, Int(1) << 80));
        if (x.sign() > 0) CHECK(e.hi > 0);
        if (x.sign() < 0) CHECK(e.lo < 0);
        if (x.sign() == 0) CHECK(x.is_zero());
    }
}
