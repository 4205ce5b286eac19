#include "helpers.hpp"

#include <doctest.h>

using namespace pisotdyn;
using namespace testutil;

TEST_CASE("exact iteration of known orbits") {
    PLMap t2 = beta_map(golden_field());
    const NumberField& g = t2.field();
    FieldElement beta = FieldElement::beta(g);

    ExactOrbit orb = iterate_exact(t2, frat(g, 1, 2), 3);
    REQUIRE(orb.points.size() == 4);
    CHECK(orb.points[1] == beta * Rat(1, 2));
    CHECK(orb.points[2] == (beta - frat(g, 1)) * Rat(1, 2));
    CHECK(orb.points[3] == frat(g, 1, 2));
    CHECK(orb.theta[0] == 0);
    CHECK(orb.theta[3] == 3);

    ExactOrbit zero = iterate_exact(t2, frat(g, 0), 5);
    for (const FieldElement& p : zero.points) CHECK(p.is_zero());

    auto [t1, s1] = kn_pair(1);
    ExactOrbit fixed = iterate_exact(s1, frat(s1.field(), 1, 3), 4);
    CHECK(fixed.points[1] == frat(s1.field(), 2, 3));
    CHECK(fixed.points[2] == frat(s1.field(), 2, 3));
}

TEST_CASE("eventual periodicity certificates") {
    PLMap t2 = beta_map(golden_field());
    const NumberField& g = t2.field();

    PeriodicityCertificate c1 = detect_eventual_period(t2, frat(g, 1), 1000);
    CHECK(c1.preperiod == 2);
    CHECK(c1.period == 1);
    CHECK(c1.witness.is_zero());

    PeriodicityCertificate c2 = detect_eventual_period(t2, frat(g, 1, 2), 1000);
    CHECK(c2.preperiod == 0);
    CHECK(c2.period == 3);

    PLMap two = beta_map(integer_field(2));
    PeriodicityCertificate c3 = detect_eventual_period(two, frat(two.field(), 1, 3), 1000);
    CHECK(c3.preperiod == 0);
    CHECK(c3.period == 2);
}

TEST_CASE("budget exhaustion reports the lattice bound") {
    PLMap t2 = beta_map(golden_field());
    CHECK(lattice_point_bound(t2, frat(t2.field(), 1, 2)) > 0);
    try {
        detect_eventual_period(t2, frat(t2.field(), 1, 2), 2);
        FAIL("expected BudgetExceeded");
    } catch (const BudgetExceeded& e) {
        CHECK(e.lattice_bound > 0);
    }
}

TEST_CASE("certificates survive re-iteration") {
    std::mt19937_64 rng(21);
    PLMap t2 = beta_map(golden_field());
    auto [t1, s1] = kn_pair(1);
    for (const PLMap* m : {&t2, &s1}) {
        for (int rep = 0; rep < 10; ++rep) {
            FieldElement x0 = random_unit_element(m->field(), rng, 20);
            PeriodicityCertificate c = detect_eventual_period(*m, x0, 1000000);
            ExactOrbit orb = iterate_exact(*m, x0, c.preperiod + 2 * c.period);
            CHECK(orb.points[c.preperiod] == orb.points[c.preperiod + c.period]);
            CHECK(orb.points[c.preperiod] == c.witness);
            // minimality of the period at the given preperiod
            for (size_t q = 1; q < c.period; ++q)
                CHECK(orb.points[c.preperiod] != orb.points[c.preperiod + q]);
        }
    }
}

TEST_CASE("numeric orbits enclose exact orbits") {
    PLMap two = beta_map(integer_field(2));
    NumericOrbit num = iterate_numeric(two, Rat(1, 3), 64, 32);
    CHECK(num.valid_prefix == 64);
    ExactOrbit exact = iterate_exact(two, frat(two.field(), 1, 3), 64);
    for (size_t i = 0; i <= num.valid_prefix; ++i)
        CHECK(num.points[i].contains(exact.points[i].as_rational()));

    NumericOrbit zero = iterate_numeric(two, Rat(0), 10, 16);
    for (auto& p : zero.points) {
        CHECK(p.lo == 0);
        CHECK(p.hi == 0);
    }

    // golden field: enclosure orbit of a rational against the exact orbit
    PLMap t2 = beta_map(golden_field());
    NumericOrbit gnum = iterate_numeric(t2, Rat(1, 3), 100, 64);
    ExactOrbit gex = iterate_exact(t2, frat(t2.field(), 1, 3), 100);
    CHECK(gnum.valid_prefix == 100);
    for (size_t i = 0; i <= gnum.valid_prefix; ++i) {
        RatInterval e = gex.points[i].enclosure(Rat(1, Int(1) << 90));
        CHECK(gnum.points[i].hi >= e.lo);
        CHECK(gnum.points[i].lo <= e.hi);
    }
}

TEST_CASE("occupation histograms") {
    NumberField two = integer_field(2);
    std::vector<FieldElement> zeros(3, frat(two, 0));
    auto h = occupation_histogram(zeros, 2);
    CHECK(h[0] == doctest::Approx(1.0));
    CHECK(h[1] == doctest::Approx(0.0));

    PLMap t2 = beta_map(golden_field());
    ExactOrbit orb = iterate_exact(t2, frat(t2.field(), 1, 2), 299);
    auto h2 = occupation_histogram(orb.points, 2);
    CHECK(h2[0] == doctest::Approx(1.0 / 3).epsilon(0.01));
    CHECK(h2[1] == doctest::Approx(2.0 / 3).epsilon(0.01));

    CHECK_THROWS_AS(occupation_histogram(std::vector<FieldElement>{}, 2), EmptyOrbit);
}
