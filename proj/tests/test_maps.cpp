#include "helpers.hpp"

#include <doctest.h>

using namespace pisotdyn;
using namespace testutil;

TEST_CASE("build validates the partition") {
    NumberField g = golden_field();
    FieldElement beta = FieldElement::beta(g);
    FieldElement inv_beta = frat(g, 1) / beta;

    Branch b0{frat(g, 0), inv_beta, true, false, 1, 1, frat(g, 0)};
    Branch b1{inv_beta, frat(g, 1), true, true, 1, 1, frat(g, -1)};
    PLMap t2 = PLMap::build(g, {b0, b1}, "t2");
    CHECK(t2.branches().size() == 2);

    CHECK_THROWS_AS(PLMap::build(g, {b0}, "gap"), PartitionGap);
    Branch overlap = b1;
    overlap.left = frat(g, 1, 2);
    overlap.b = frat(g, 1) - beta * frat(g, 1, 2);
    CHECK_THROWS_AS(PLMap::build(g, {b0, overlap}, "overlap"), PartitionOverlap);
    Branch escapes = b1;
    escapes.b = frat(g, 0);
    CHECK_THROWS_AS(PLMap::build(g, {b0, escapes}, "escape"), ImageEscapes);
}

TEST_CASE("beta map branch structure") {
    PLMap g = beta_map(golden_field());
    REQUIRE(g.branches().size() == 2);
    CHECK(g.branches()[0].right == frat(g.field(), 1) / FieldElement::beta(g.field()));

    // integer base: singleton branch sends 1 to 0
    PLMap two = beta_map(integer_field(2));
    REQUIRE(two.branches().size() == 3);
    CHECK(two.branches().back().is_singleton());
    CHECK(two.apply(frat(two.field(), 1)).first == frat(two.field(), 0));

    PLMap s = beta_map(silver_field());
    REQUIRE(s.branches().size() == 3);
    FieldElement inv = frat(s.field(), 1) / FieldElement::beta(s.field());
    CHECK(s.branches()[0].right == inv);
    CHECK(s.branches()[1].right == inv + inv);
}

TEST_CASE("flip radix maps") {
    PLMap tent = flip_radix_map(2, {0, 1});
    REQUIRE(tent.branches().size() == 3);  // two halves plus the singleton at 1
    CHECK(tent.branches()[0].epsilon == 1);
    CHECK(tent.branches()[1].epsilon == -1);
    CHECK(tent.apply(frat(tent.field(), 3, 4)).first == frat(tent.field(), 1, 2));
    CHECK(tent.apply(frat(tent.field(), 1)).first == frat(tent.field(), 0));

    PLMap bin = flip_radix_map(2, {0, 0});
    CHECK(bin.apply(frat(bin.field(), 3, 4)).first == frat(bin.field(), 1, 2));

    std::vector<int> s(10, 0);
    s[0] = 1;
    PLMap dec = flip_radix_map(10, s);
    CHECK(dec.apply(frat(dec.field(), 1, 20)).first == frat(dec.field(), 1, 2));

    CHECK_THROWS_AS(flip_radix_map(3, {0, 1}), LengthMismatch);
}

TEST_CASE("reference pairs") {
    auto [t1, s1] = kn_pair(1);
    CHECK(t1.field().degree() == 1);
    REQUIRE(s1.branches().size() >= 3);
    CHECK(s1.branches()[0].right == frat(s1.field(), 1, 2));
    CHECK(s1.branches()[1].right == frat(s1.field(), 3, 4));
    CHECK(s1.branches()[0].m == 1);
    CHECK(s1.branches()[1].m == 2);
    CHECK(s1.branches()[2].m == 2);
    CHECK(t1.apply(frat(t1.field(), 3, 4)).first == frat(t1.field(), 1, 2));

    auto [t2, s2] = kn_pair(2);
    CHECK(t2.field().degree() == 2);
    FieldElement inv = frat(s2.field(), 1) / FieldElement::beta(s2.field());
    CHECK(s2.branches()[0].right == inv);
    CHECK(s2.branches()[0].m == 1);
    CHECK(s2.branches()[1].m == 2);
}

TEST_CASE("handelman identities and maps") {
    NumberField g = golden_field();
    auto sols = handelman_search(g, 2, Int(3));
    bool has11 = false;
    for (auto& v : sols) has11 = has11 || v == std::vector<Int>{Int(1), Int(1)};
    CHECK(has11);

    NumberField two = integer_field(2);
    auto s1 = handelman_search(two, 1, Int(3));
    REQUIRE(s1.size() == 1);
    CHECK(s1[0] == std::vector<Int>{Int(2)});
    auto s2 = handelman_search(two, 2, Int(3));
    bool has12 = false;
    for (auto& v : s2) has12 = has12 || v == std::vector<Int>{Int(1), Int(2)};
    CHECK(has12);

    // golden (1,1) with positive signs reproduces the second reference map
    PLMap hm = handelman_map(g, {Int(1), Int(1)}, {1, 2}, {1, 1});
    auto [t2, ref] = kn_pair(2);
    REQUIRE(hm.branches().size() == ref.branches().size());
    for (size_t i = 0; i < ref.branches().size(); ++i) {
        CHECK(hm.branches()[i].left == ref.branches()[i].left);
        CHECK(hm.branches()[i].slope == ref.branches()[i].slope);
        CHECK(hm.branches()[i].b == ref.branches()[i].b);
    }

    PLMap tent = handelman_map(two, {Int(2)}, {1, 1}, {1, -1});
    CHECK(tent.apply(frat(two, 3, 4)).first == frat(two, 1, 2));
    CHECK(tent.branches()[1].epsilon == -1);

    CHECK_THROWS_AS(handelman_map(g, {Int(2)}, {1, 1}, {1, 1}), BadIdentity);
    CHECK_THROWS_AS(handelman_map(g, {Int(1), Int(1)}, {1, 1}, {1, 1}), BadArrangement);
}

TEST_CASE("handelman branches map their closures onto [0,1]") {
    NumberField g = golden_field();
    for (int sign0 : {1, -1})
        for (int sign1 : {1, -1}) {
            PLMap m = handelman_map(g, {Int(1), Int(1)}, {1, 2}, {sign0, sign1});
            for (const Branch& br : m.branches()) {
                FieldElement a = br.image(br.left), b = br.image(br.right);
                if (a > b) std::swap(a, b);
                CHECK(a == frat(g, 0));
                CHECK(b == frat(g, 1));
            }
        }
}

TEST_CASE("S_t family") {
    NumberField s = silver_field();
    FieldElement beta = FieldElement::beta(s);
    FieldElement tmax = frat(s, 3) / beta - frat(s, 1);

    PLMap s0 = st_map(s, frat(s, 0));
    REQUIRE(s0.branches().size() == 3);
    FieldElement t = tmax * Rat(1, 3);
    PLMap st = st_map(s, t);
    CHECK(st.branches()[1].right == frat(s, 2) / beta - t);
    CHECK(st.branches().back().m == 1);
    // last branch is beta*(x-1)+1
    CHECK(st.branches().back().b == frat(s, 1) - beta);

    CHECK_THROWS_AS(st_map(s, tmax + frat(s, 1, 100)), TOutOfRange);
    CHECK_THROWS_AS(st_map(s, frat(s, -1, 100)), TOutOfRange);

    // integer base: t range is {0} and S_0 is the beta map
    NumberField two = integer_field(2);
    PLMap i0 = st_map(two, frat(two, 0));
    PLMap b2 = beta_map(two);
    REQUIRE(i0.branches().size() == b2.branches().size());
    for (size_t i = 0; i < i0.branches().size(); ++i) {
        CHECK(i0.branches()[i].left == b2.branches()[i].left);
        CHECK(i0.branches()[i].b == b2.branches()[i].b);
    }
    CHECK_THROWS_AS(st_map(two, frat(two, 1, 100)), TOutOfRange);
}

TEST_CASE("flipped counterexample map") {
    NumberField p = plastic_field();
    PLMap m = flipped_beta_counterexample(p);
    REQUIRE(m.branches().size() == 2);
    CHECK(m.branches()[0].epsilon == -1);
    CHECK(m.apply(frat(p, 0)).first == frat(p, 1));
    CHECK_THROWS_AS(flipped_beta_counterexample(golden_field()), BetaOutOfRange);
}

TEST_CASE("apply resolves branch ownership exactly") {
    PLMap t2 = beta_map(golden_field());
    const NumberField& g = t2.field();
    FieldElement beta = FieldElement::beta(g);
    auto [y, i] = t2.apply(frat(g, 1));
    CHECK(y == beta - frat(g, 1));
    CHECK(i == 1);

    auto [t1, s1] = kn_pair(1);
    auto [z, j] = s1.apply(frat(s1.field(), 2, 3));
    CHECK(z == frat(s1.field(), 2, 3));  // 4*(2/3) - 2
    CHECK(s1.branches()[j].left == frat(s1.field(), 1, 2));

    NumberField s = silver_field();
    FieldElement t = (frat(s, 3) / FieldElement::beta(s) - frat(s, 1)) * Rat(1, 2);
    PLMap st = st_map(s, t);
    FieldElement bp = frat(s, 2) / FieldElement::beta(s) - t;
    CHECK(st.apply(bp).first == FieldElement::beta(s) * (bp - frat(s, 1)) + frat(s, 1));

    CHECK_THROWS_AS(t2.apply(frat(g, 3, 2)), OutOfDomain);
}

TEST_CASE("one sided application") {
    NumberField s = silver_field();
    FieldElement beta = FieldElement::beta(s);
    FieldElement t = (frat(s, 3) / beta - frat(s, 1)) * Rat(1, 3);
    PLMap st = st_map(s, t);
    FieldElement r0 = frat(s, 2) / beta - t;

    auto right = st.apply_one_sided(r0, Side::Right);
    CHECK(right.value == beta * r0 - beta + frat(s, 1));
    CHECK(right.side == Side::Right);
    auto left = st.apply_one_sided(r0, Side::Left);
    CHECK(left.value == beta * r0 - frat(s, 1));
    CHECK(left.side == Side::Left);

    PLMap tent = flip_radix_map(2, {0, 1});
    auto at_half = tent.apply_one_sided(frat(tent.field(), 1, 2), Side::Left);
    CHECK(at_half.value == frat(tent.field(), 1));
    CHECK(at_half.side == Side::Left);
    // negative slope flips the side
    auto flipped = tent.apply_one_sided(frat(tent.field(), 1, 2), Side::Right);
    CHECK(flipped.side == Side::Left);

    CHECK_THROWS_AS(tent.apply_one_sided(frat(tent.field(), 0), Side::Left), NoSidedNeighborhood);
    CHECK_THROWS_AS(tent.apply_one_sided(frat(tent.field(), 1), Side::Right), NoSidedNeighborhood);
}

TEST_CASE("affine forms reproduce the orbit") {
    auto [t1, s1] = kn_pair(1);
    AffineForm f2 = affine_form(s1, frat(s1.field(), 1, 3), 2);
    CHECK(f2.theta == 3);

    AffineForm f0 = affine_form(s1, frat(s1.field(), 1, 3), 0);
    CHECK(f0.sign == 1);
    CHECK(f0.theta == 0);
    CHECK(f0.intercept.is_zero());

    PLMap t2 = beta_map(golden_field());
    AffineForm g2 = affine_form(t2, frat(t2.field(), 1), 2);
    CHECK(g2.theta == 2);
    CHECK(g2.eval(frat(t2.field(), 1)) == frat(t2.field(), 0));

    // soundness against iteration, including a flipped map
    std::mt19937_64 rng(11);
    PLMap tent = flip_radix_map(2, {0, 1});
    for (const PLMap* m : {&s1, &t2, &tent}) {
        for (int rep = 0; rep < 5; ++rep) {
            FieldElement x0 = random_unit_element(m->field(), rng);
            ExactOrbit orb = iterate_exact(*m, x0, 50);
            for (unsigned n : {1u, 7u, 50u})
                CHECK(affine_form(*m, x0, n).eval(x0) == orb.points[n]);
        }
    }
}

TEST_CASE("theta increments stay within [1, max m]") {
    auto [t1, s1] = kn_pair(1);
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 10; ++rep) {
        ExactOrbit orb = iterate_exact(s1, random_unit_element(s1.field(), rng), 200);
        for (size_t n = 0; n + 1 < orb.theta.size(); ++n) {
            unsigned d = orb.theta[n + 1] - orb.theta[n];
            CHECK(d >= 1);
            CHECK(d <= s1.max_m());
        }
    }
}

TEST_CASE("digits of the S_t family") {
    NumberField s = silver_field();
    FieldElement beta = FieldElement::beta(s);
    PLMap s0 = st_map(s, frat(s, 0));
    CHECK(digit_alpha(s0, frat(s, 1, 10)) == frat(s, 0));
    CHECK(digit_alpha(s0, frat(s, 1, 2)) == frat(s, 1));
    // last branch carries digit beta - 1
    FieldElement x = frat(s, 9, 10);
    CHECK(digit_alpha(s0, x) == beta - frat(s, 1));

    std::vector<FieldElement> d = digit_set(s);
    REQUIRE(d.size() == 3);
    CHECK(d[0] == frat(s, 0));
    CHECK(d[1] == frat(s, 1));
    CHECK(d[2] == beta - frat(s, 1));
    CHECK(digit_set(integer_field(2)).size() == 2);
}
