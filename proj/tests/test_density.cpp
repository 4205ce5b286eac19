#include "helpers.hpp"

#include <doctest.h>

using namespace pisotdyn;
using namespace testutil;

namespace {

// off-breakpoint rational sample grid i/101, i = 1..count
std::vector<FieldElement> sample_grid(const NumberField& f, int count) {
    std::vector<FieldElement> xs;
    for (int i = 1; i <= count; ++i) xs.push_back(frat(f, i, 101));
    return xs;
}

bool close(const FieldElement& a, const FieldElement& b, const Rat& eps) {
    return ((a - b).abs() - FieldElement::rational(a.field(), eps)).sign() < 0;
}

FieldElement admissible_t(const NumberField& f, int i, int of) {
    FieldElement beta = FieldElement::beta(f);
    Int ceil_beta = beta.floor() + (beta.frac().is_zero() ? 0 : 1);
    FieldElement tmax = FieldElement::integer(f, ceil_beta) / beta - frat(f, 1);
    return tmax * Rat(i, of);
}

}  // namespace

TEST_CASE("parry density of integer bases is Lebesgue") {
    NumberField two = integer_field(2);
    ParryDensity p = parry_density_profile(two, 16);
    for (int i = 0; i <= 3; ++i) CHECK(eval_parry(p, frat(two, i, 4)).value == frat(two, 1));
    DensityValue z = normalize_check(p);
    CHECK(z.value == frat(two, 1));
    CHECK(transfer_residual(p, sample_grid(two, 20)).is_zero());
}

TEST_CASE("parry density of the golden base") {
    NumberField g = golden_field();
    FieldElement beta = FieldElement::beta(g);
    ParryDensity p = parry_density_profile(g, 64);
    Rat eps(1, Int(1) << 30);

    // (5 + 3 sqrt 5)/10 = (1 + 3 beta)/5 on [0, 1/beta)
    CHECK(close(eval_parry(p, frat(g, 3, 10)).value, FieldElement(g, {Rat(1, 5), Rat(3, 5)}), eps));
    // (5 + sqrt 5)/10 = (2 + beta)/5 on [1/beta, 1]
    CHECK(close(eval_parry(p, frat(g, 7, 10)).value, FieldElement(g, {Rat(2, 5), Rat(1, 5)}), eps));

    DensityValue z = normalize_check(p);
    CHECK(close(z.value, frat(g, 1), Rat(3) * z.tail));

    FieldElement res = transfer_residual(p, sample_grid(g, 50));
    CHECK((res - FieldElement::rational(g, Rat(3) * eval_parry(p, frat(g, 1, 2)).tail)).sign() <=
          0);
}

TEST_CASE("S_t profile structure") {
    NumberField s = silver_field();
    FieldElement t = admissible_t(s, 1, 3);
    StDensityProfile p = st_profile(s, t, 64);

    CHECK(p.r[0] == p.l[0]);
    CHECK(p.r[0] == frat(s, 2) / FieldElement::beta(s) - t);
    for (unsigned n = 0; n <= p.N; ++n) {
        CHECK(p.r[n].sign() >= 0);
        CHECK((p.r[n] - frat(s, 1)).sign() <= 0);
        CHECK(p.l[n].sign() >= 0);
        CHECK((p.l[n] - frat(s, 1)).sign() <= 0);
    }
    for (unsigned n = 1; n <= p.N; ++n) {
        int diff = p.iota_plus[n] - p.iota_minus[n];
        CHECK(diff >= -1);
        CHECK(diff <= 1);
    }
    CHECK(p.breakpoints.front().is_zero());
    CHECK(p.breakpoints.back() == frat(s, 1));

    // the canonical constant agrees with its summed form
    FieldElement beta = FieldElement::beta(s);
    FieldElement c = (beta - frat(s, 2)) / (beta - frat(s, 1));
    FieldElement pw = frat(s, 1);
    for (unsigned n = 1; n <= p.N; ++n) {
        pw = pw / beta;
        c += pw * Rat(p.iota_plus[n] - p.iota_minus[n]);
    }
    CHECK(p.C == c);
}

TEST_CASE("S_t density checks across the admissible range") {
    NumberField s = silver_field();
    std::vector<FieldElement> xs = sample_grid(s, 40);
    for (int i : {0, 3, 9, 15, 20}) {
        StDensityProfile p = st_profile(s, admissible_t(s, i, 21), 64);

        DensityValue z = normalize_check(p);
        CHECK(close(z.value, frat(s, 1), Rat(3) * z.tail));

        BoundsReport br = bounds_check(p);
        CHECK(br.beta_at_least_two);
        CHECK(br.passed);
        FieldElement beta = FieldElement::beta(s);
        CHECK(br.lower == (beta - frat(s, 2)) / (beta - frat(s, 1)));
        CHECK(br.upper == beta / (beta - frat(s, 1)));

        FieldElement res = transfer_residual(p, xs);
        CHECK((res - FieldElement::rational(s, Rat(3) * p.eval_tail)).sign() <= 0);

        ExpansionReport er = expansion_identities(p);
        CHECK(er.passed);
    }
}

TEST_CASE("integer base S_0 density is exactly 1") {
    for (int n : {2, 3}) {
        NumberField f = integer_field(n);
        StDensityProfile p = st_profile(f, frat(f, 0), 24);
        for (const FieldElement& v : p.values) CHECK(v == frat(f, 1));
        CHECK(eval_density(p, frat(f, 1, 3)).value == frat(f, 1));
        CHECK(normalize_check(p).value == frat(f, 1));
        CHECK(transfer_residual(p, sample_grid(f, 20)).is_zero());
        CHECK(p.normalizer == frat(f, 1));
    }
}

TEST_CASE("evaluation agrees with the table") {
    NumberField s = silver_field();
    StDensityProfile p = st_profile(s, frat(s, 0), 48);
    for (size_t i = 0; i + 1 < p.breakpoints.size(); ++i) {
        FieldElement mid = (p.breakpoints[i] + p.breakpoints[i + 1]) * Rat(1, 2);
        CHECK(eval_density(p, mid).value == p.values[i]);
    }
}

TEST_CASE("positivity fails below beta = 2") {
    NumberField p = plastic_field();
    StDensityProfile prof = st_profile(p, admissible_t(p, 1, 3), 48);
    BoundsReport br = bounds_check(prof);
    CHECK_FALSE(br.beta_at_least_two);
    CHECK_FALSE(br.passed);
    CHECK_FALSE(br.violations.empty());  // flags subintervals not certifiably positive
}

TEST_CASE("sign structure of the combined series") {
    NumberField s = silver_field();
    for (int i : {0, 7, 14}) {
        StDensityProfile p = st_profile(s, admissible_t(s, i, 21), 64);
        for (unsigned n = 1; n <= p.N; ++n) {
            int diff = p.iota_plus[n] - p.iota_minus[n];
            // diff = -1 forces d_n >= 1 everywhere, so r_n <= l_n (and dually)
            if (diff == -1) CHECK((p.r[n] - p.l[n]).sign() <= 0);
            if (diff == 1) CHECK((p.l[n] - p.r[n]).sign() <= 0);
        }
    }
}

TEST_CASE("digit machinery and the key equality") {
    NumberField s = silver_field();
    StDensityProfile p = st_profile(s, admissible_t(s, 2, 7), 32);
    DigitMachinery m = digit_machinery(p);
    REQUIRE(m.digits.size() == 3);

    // alpha telescopes the one-sided orbits
    FieldElement beta = FieldElement::beta(s);
    for (unsigned n = 0; n + 1 <= p.N; ++n) {
        CHECK(m.alpha_r[n] == beta * p.r[n] - p.r[n + 1]);
        CHECK(m.alpha_l[n] == beta * p.l[n] - p.l[n + 1]);
    }

    std::vector<FieldElement> xs = sample_grid(s, 25);
    for (const FieldElement& x : xs)
        for (unsigned n = 1; n <= 20; ++n) CHECK(key_equality(m, p, x, n));

    // integer base: selector always the two plain digits
    NumberField two = integer_field(2);
    StDensityProfile p2 = st_profile(two, frat(two, 0), 16);
    DigitMachinery m2 = digit_machinery(p2);
    for (const FieldElement& x : sample_grid(two, 10))
        for (unsigned n = 1; n <= 10; ++n) CHECK(key_equality(m2, p2, x, n));
}

TEST_CASE("expansion identities recover the discontinuity") {
    NumberField s = silver_field();
    StDensityProfile p = st_profile(s, frat(s, 0), 64);
    ExpansionReport er = expansion_identities(p);
    CHECK(er.passed);
    CHECK((er.r_defect - FieldElement::rational(s, er.tail)).sign() <= 0);
    CHECK((er.l_defect - FieldElement::rational(s, er.tail)).sign() <= 0);
}

TEST_CASE("samples on breakpoints are rejected") {
    NumberField s = silver_field();
    StDensityProfile p = st_profile(s, frat(s, 0), 16);
    CHECK_THROWS_AS(transfer_residual(p, {p.breakpoints[1]}), SampleOnBreakpoint);
}
