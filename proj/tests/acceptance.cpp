// Acceptance gate: one line per criterion, nonzero exit if any fail.
#include "helpers.hpp"

#include <chrono>
#include <iostream>

using namespace pisotdyn;
using namespace testutil;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

struct Criterion {
    const char* name;
    Clock::time_point start = Clock::now();
    bool ok = true;
    std::string detail;

    explicit Criterion(const char* n) : name(n) {}

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }

    void finish(double time_limit_s) {
        double secs = std::chrono::duration<double>(Clock::now() - start).count();
        if (secs > time_limit_s) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("over time limit");
        }
        std::cout << name << ": " << (ok ? "PASS" : "FAIL");
        if (!detail.empty()) std::cout << " [" << detail << "]";
        char buf[32];
        std::snprintf(buf, sizeof buf, " (%.1fs)", secs);
        std::cout << buf << "\n";
        if (!ok) ++failures;
    }
};

FieldElement silver_t(const NumberField& s, int i, int of) {
    return (frat(s, 3) / FieldElement::beta(s) - frat(s, 1)) * Rat(i, of);
}

void criterion1() {
    Criterion c("criterion 1 (Pisot classification)");
    auto timed = [&](const NumberField& f, BetaClass want, const std::string& label) {
        auto t0 = Clock::now();
        c.require(classify(f) == want, label + " misclassified");
        c.require(std::chrono::duration<double>(Clock::now() - t0).count() < 1.0,
                  label + " over 1s");
    };
    timed(golden_field(), BetaClass::Pisot, "x^2-x-1");
    timed(silver_field(), BetaClass::Pisot, "x^2-3x+1");
    timed(plastic_field(), BetaClass::Pisot, "x^3-x-1");
    for (int n = 2; n <= 10; ++n)
        timed(integer_field(n), BetaClass::Pisot, "x-" + std::to_string(n));
    timed(NumberField::make({Int(-2), Int(0), Int(1)}, RatInterval(Rat(1), Rat(2))),
          BetaClass::Neither, "x^2-2");
    c.finish(15);
}

void criterion2() {
    Criterion c("criterion 2 (eventual periodicity)");
    auto [t2, s2] = kn_pair(2);
    auto [t1, s1] = kn_pair(1);
    NumberField g = t2.field();
    PLMap handel = handelman_map(g, {Int(1), Int(1)}, {1, 2}, {1, -1});
    std::mt19937_64 rng(0x5eed);
    for (const PLMap* m : {&t2, &s2, &s1, &handel}) {
        for (int rep = 0; rep < 50 && c.ok; ++rep) {
            FieldElement x0 = random_unit_element(m->field(), rng, 100);
            try {
                PeriodicityCertificate cert = detect_eventual_period(*m, x0, 1000000);
                ExactOrbit orb = iterate_exact(*m, x0, cert.preperiod + 2 * cert.period);
                c.require(orb.points[cert.preperiod] == orb.points[cert.preperiod + cert.period],
                          m->label() + ": certificate fails re-iteration");
            } catch (const BudgetExceeded&) {
                c.require(false, m->label() + ": budget exceeded");
            }
        }
    }
    c.finish(30);
}

void criterion3() {
    Criterion c("criterion 3 (separation of F_{E-E})");
    NumberField g = golden_field();
    DigitSet e01 = DigitSet::make(g, {frat(g, 0), frat(g, 1)});
    DigitSet diff = e01.difference();
    Rat r = separation_bound(diff);
    WindowEnumeration w = enumerate_window(diff, frat(g, -1), frat(g, 2), EnumMethod::DigitBfs);
    try {
        GapReport rep = verify_min_gap(w, r);
        c.require(rep.passed, "E={0,1} gap check failed");
    } catch (const GapViolation&) {
        c.require(false, "E={0,1} min gap <= bound");
    }

    auto [t2, s2] = kn_pair(2);
    DigitSet es = coupling_digits(s2);
    Rat rs = separation_bound(es.difference());
    // gaps of F_E are nonzero elements of F_{E-E}, so R certifies both views
    WindowEnumeration we = enumerate_window(es, frat(g, -1), frat(g, 2), EnumMethod::DigitBfs);
    try {
        GapReport rep = verify_min_gap(we, rs);
        c.require(rep.passed, "intercept digit set gap check failed");
    } catch (const GapViolation&) {
        c.require(false, "intercept digit set min gap <= bound");
    }
    WindowEnumeration wd =
        enumerate_window(es.difference(), frat(g, -1), frat(g, 2), EnumMethod::DigitBfs);
    for (const FieldElement& x : wd.elements)
        if (!x.is_zero())
            c.require((x.abs() - FieldElement::rational(g, rs)).sign() > 0,
                      "difference set element inside the separation radius");
    c.finish(10);
}

void criterion4() {
    Criterion c("criterion 4 (coupling conditions)");
    std::vector<std::pair<PLMap, PLMap>> pairs;
    pairs.push_back(kn_pair(1));
    pairs.push_back(kn_pair(2));
    pairs.emplace_back(flip_radix_map(2, {0, 0}), flip_radix_map(2, {0, 1}));

    for (auto& [t, s] : pairs) {
        WindowEnumeration w = coupling_window(s);
        for (long den : {2L, 3L}) {
            FieldElement x0 = frat(t.field(), 1, den);
            try {
                CouplingReport fwd = coupling_forward(t, s, x0, 10000, w);
                c.require(fwd.violations.empty(), s.label() + " forward violations");
                for (size_t n = 0; n + 1 < fwd.k.size(); ++n) {
                    size_t d = fwd.k[n + 1] - fwd.k[n];
                    c.require(d >= 1 && d <= fwd.M, s.label() + " forward step out of [1,M]");
                }
                CouplingReport rev = coupling_reverse(t, s, x0, 10000, w);
                c.require(rev.violations.empty(), s.label() + " reverse violations");
                for (unsigned j : rev.j) c.require(j < rev.M, s.label() + " reverse j >= M");
            } catch (const OffsetOutsideWindow&) {
                c.require(false, s.label() + " offset escaped the window");
            }
        }
    }
    c.finish(60);
}

void criterion5() {
    Criterion c("criterion 5 (appendix density)");
    NumberField s = silver_field();
    FieldElement beta = FieldElement::beta(s);
    FieldElement lower = (beta - frat(s, 2)) / (beta - frat(s, 1));
    FieldElement upper = beta / (beta - frat(s, 1));
    std::vector<FieldElement> residual_xs, key_xs;
    for (int i = 1; i <= 100; ++i) residual_xs.push_back(frat(s, i, 101));
    for (int i = 1; i <= 50; ++i) key_xs.push_back(frat(s, 2 * i - 1, 103));

    for (int i = 0; i < 20 && c.ok; ++i) {
        std::string tag = "t_" + std::to_string(i);
        StDensityProfile p = st_profile(s, silver_t(s, i, 21), 64);

        DensityValue z = normalize_check(p);
        c.require(((z.value - frat(s, 1)).abs() -
                   FieldElement::rational(s, Rat(3) * z.tail)).sign() <= 0,
                  tag + ": integral away from 1");

        FieldElement res = transfer_residual(p, residual_xs);
        c.require((res - FieldElement::rational(s, Rat(3) * p.eval_tail)).sign() <= 0,
                  tag + ": transfer residual too large");

        BoundsReport br = bounds_check(p);
        c.require(br.passed && br.lower == lower && br.upper == upper,
                  tag + ": bounds check failed");

        DigitMachinery m = digit_machinery(p);
        for (const FieldElement& x : key_xs)
            for (unsigned n = 1; n <= 20; ++n)
                if (!key_equality(m, p, x, n)) {
                    c.require(false, tag + ": key equality fails at n=" + std::to_string(n));
                    n = 21;
                    break;
                }

        c.require(expansion_identities(p).passed, tag + ": expansion identities failed");
    }
    c.finish(120);
}

void criterion6() {
    Criterion c("criterion 6 (integer base calibration)");
    for (int n : {2, 3}) {
        NumberField f = integer_field(n);
        std::string tag = "base " + std::to_string(n);
        ParryDensity parry = parry_density_profile(f, 16);
        for (int i = 0; i <= 9; ++i)
            c.require(eval_parry(parry, frat(f, i, 10)).value == frat(f, 1),
                      tag + ": parry density not 1");
        StDensityProfile p = st_profile(f, frat(f, 0), 16);
        for (const FieldElement& v : p.values)
            c.require(v == frat(f, 1), tag + ": S_0 profile not 1");
        std::vector<FieldElement> xs;
        for (int i = 1; i <= 20; ++i) xs.push_back(frat(f, i, 23));
        c.require(transfer_residual(p, xs).is_zero(), tag + ": nonzero residual");
        c.require(transfer_residual(parry, xs).is_zero(), tag + ": nonzero parry residual");
    }
    c.finish(5);
}

void criterion7() {
    Criterion c("criterion 7 (statistical equivalence)");
    auto [t2, s2] = kn_pair(2);
    const NumberField& g = t2.field();
    const std::uint64_t recorded_state = 0x9e3779b97f4a7c15ULL;
    FieldElement x0 = FieldElement::rational(g, seed_rational(recorded_state));

    std::vector<Rat> ref = parry_bin_masses(parry_density_profile(g, 64), 32);
    GenericReport rep = generic_report(t2, ref, s2, lebesgue_bin_masses(32), x0, 1000000, 32);
    c.require(rep.sup_T < Rat(1, 100), "T histogram sup distance >= 0.01");
    c.require(rep.sup_S < Rat(1, 100), "S histogram sup distance >= 0.01");
    c.require(rep.coupling_violations == 0, "coupling violations in the summary");

    NumberField p = plastic_field();
    FieldElement beta = FieldElement::beta(p);
    Interval dissipative{beta - frat(p, 1), -(beta * beta) + beta + frat(p, 1)};
    FieldElement y0 = FieldElement::rational(p, seed_rational(recorded_state + 1));
    Rat fs = interval_frequency(flipped_beta_counterexample(p), y0, 500000, 1000000, dissipative);
    Rat ft = interval_frequency(beta_map(p), y0, 500000, 1000000, dissipative);
    c.require(fs < Rat(1, 1000), "flipped map keeps mass on the dissipative interval");
    c.require(ft > Rat(1, 10), "beta map frequency unexpectedly small");
    c.finish(300);
}

void criterion8() {
    Criterion c("criterion 8 (mutation sensitivity)");
    auto [t2, s2] = kn_pair(2);
    const NumberField& g = t2.field();
    WindowEnumeration w = coupling_window(s2);
    size_t worst = 0;
    for (long den : {2L, 3L}) {
        FieldElement x0 = frat(g, 1, den);
        CouplingReport rep = coupling_forward(t2, s2, x0, 10000, w);
        for (auto [lo, hi] : {std::pair{Rat(2, 5), Rat(3, 5)}, {Rat(0), Rat(1, 4)}}) {
            Interval I{FieldElement::rational(g, lo), FieldElement::rational(g, hi)};
            TildeSet t = tilde_set(I, w.elements, rep.M, Direction::Forward, t2);
            for (size_t drop = 0; drop < t.set.components.size(); ++drop) {
                IntervalUnion mutated;
                for (size_t i = 0; i < t.set.components.size(); ++i)
                    if (i != drop) mutated.components.push_back(t.set.components[i]);
                worst = std::max(worst,
                                 membership_implication_check(t2, s2, x0, rep, I, mutated));
            }
        }
    }
    c.require(worst > 0, "no mutation produced a violation");
    c.finish(60);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    return failures == 0 ? 0 : 1;
}
