#include "pisotdyn/density.hpp"

#include <algorithm>

namespace pisotdyn {

namespace {

Rat beta_lower(const NumberField& field) {
    Rat lo = field.root_enclosure(Rat(1, Int(1) << 40)).lo;
    if (lo <= 1) throw DensityError("beta lower bound not above 1");
    return lo;
}

Rat pow_rat(const Rat& b, unsigned n) {
    Rat acc = 1, base = b;
    while (n) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

/// Upper bound on mult * beta^-N / (beta - 1).
Rat tail_upper(const NumberField& field, unsigned N, unsigned mult) {
    Rat lo = beta_lower(field);
    return Rat(mult) / (pow_rat(lo, N) * (lo - 1));
}

FieldElement fe_one(const NumberField& f) { return FieldElement::rational(f, 1); }

void sort_dedup(std::vector<FieldElement>& v) {
    std::sort(v.begin(), v.end(), [](const FieldElement& a, const FieldElement& b) {
        if (a == b) return false;
        return a < b;
    });
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

/// The raw (unnormalized) truncated series; termwise coefficients in {-1,0,1}.
FieldElement raw_st_series(const StDensityProfile& p, const FieldElement& x) {
    FieldElement inv_b = fe_one(p.field) / FieldElement::beta(p.field);
    FieldElement h = fe_one(p.field);
    FieldElement pw = fe_one(p.field);
    for (unsigned n = 1; n <= p.N; ++n) {
        pw *= inv_b;
        int dn = ((x - p.r[n]).sign() >= 0 ? 1 : 0) + ((x - p.l[n]).sign() < 0 ? 1 : 0);
        int c = p.iota_plus[n] - p.iota_minus[n] + dn - 1;
        if (c) h += pw * Rat(c);
    }
    return h;
}

}  // namespace

unsigned default_truncation(const NumberField& field, const Rat& eps) {
    for (unsigned N = 1; N <= 4096; ++N)
        if (tail_upper(field, N, 2) < eps) return N;
    throw DensityError("default_truncation: beta too close to 1 for the requested tolerance");
}

ParryDensity parry_density_profile(const NumberField& field, unsigned N) {
    if (N < 1) throw DensityError("parry_density_profile: N >= 1 required");
    ParryDensity p;
    p.field = field;
    p.map = beta_map(field);
    p.N = N;
    FieldElement x = fe_one(field);
    FieldElement inv_b = fe_one(field) / FieldElement::beta(field);
    FieldElement pw = fe_one(field);
    FieldElement F = FieldElement::rational(field, 0);
    for (unsigned n = 0; n <= N; ++n) {
        p.orbit_of_one.push_back(x);
        F += x * pw;
        pw *= inv_b;
        x = p.map.apply(x).first;
    }
    p.normalizer = std::move(F);
    p.series_tail = tail_upper(field, N, 1);
    return p;
}

DensityValue eval_parry(const ParryDensity& p, const FieldElement& x) {
    if (x.sign() < 0 || (x - fe_one(p.field)).sign() > 0)
        throw DensityError("eval_parry: point outside [0,1]");
    FieldElement inv_b = fe_one(p.field) / FieldElement::beta(p.field);
    FieldElement pw = fe_one(p.field);
    FieldElement num = FieldElement::rational(p.field, 0);
    for (const FieldElement& tn : p.orbit_of_one) {
        if ((x - tn).sign() < 0) num += pw;
        pw *= inv_b;
    }
    FieldElement h = num / p.normalizer;
    Rat prec(1, Int(1) << 40);
    Rat f_lo = p.normalizer.enclosure(prec).lo;
    Rat h_up = h.enclosure(prec).hi;
    if (f_lo <= 0) throw DensityError("eval_parry: normalizer not certified positive");
    return {std::move(h), p.series_tail * (Rat(1) + (h_up > 0 ? h_up : Rat(0))) / f_lo};
}

DensityValue parry_density(const NumberField& field, const FieldElement& x, unsigned N) {
    return eval_parry(parry_density_profile(field, N), x);
}

StDensityProfile st_profile(const NumberField& field, const FieldElement& t, unsigned N) {
    if (N < 1) throw DensityError("st_profile: N >= 1 required");
    StDensityProfile p;
    p.field = field;
    p.t = t;
    p.map = st_map(field, t);
    p.N = N;
    FieldElement b = FieldElement::beta(field);

    if (field.is_trivial()) {
        // integer beta: the discontinuity degenerates to the endpoint 1 and
        // both one-sided orbits follow the exact orbit of 1 (1 -> 0 -> 0 ...)
        FieldElement x = fe_one(field);
        for (unsigned n = 0; n <= N; ++n) {
            p.r.push_back(x);
            p.l.push_back(x);
            x = p.map.apply(x).first;
        }
    } else {
        FieldElement x0 = FieldElement::rational(field, Rat(b.floor())) / b - t;
        FieldElement xr = x0, xl = x0;
        Side sr = Side::Right, sl = Side::Left;
        p.r.push_back(xr);
        p.l.push_back(xl);
        for (unsigned n = 1; n <= N; ++n) {
            auto rr = p.map.apply_one_sided(xr, sr);
            xr = rr.value;
            sr = rr.side;
            auto ll = p.map.apply_one_sided(xl, sl);
            xl = ll.value;
            sl = ll.side;
            p.r.push_back(xr);
            p.l.push_back(xl);
        }
    }

    p.iota_plus.assign(N + 1, 0);
    p.iota_minus.assign(N + 1, 0);
    for (unsigned n = 1; n <= N; ++n) {
        // iota flags the one-sided orbit taking the last branch (digit
        // beta-1): at the tie r_n = r_0 the right-sided orbit does, the
        // left-sided orbit does not, hence >= for r and > for l
        p.iota_plus[n] = (p.r[n] - p.r[0]).sign() >= 0 ? 1 : 0;
        p.iota_minus[n] = (p.l[n] - p.l[0]).sign() > 0 ? 1 : 0;
    }

    // canonical form C = 1 - 1/(beta-1) + sum (iota+ - iota-) beta^-n;
    // identical to (beta-2)/(beta-1) + the same sum
    FieldElement inv_b = fe_one(field) / b;
    FieldElement C = fe_one(field) - fe_one(field) / (b - Rat(1));
    FieldElement pw = fe_one(field);
    for (unsigned n = 1; n <= N; ++n) {
        pw *= inv_b;
        int c = p.iota_plus[n] - p.iota_minus[n];
        if (c) C += pw * Rat(c);
    }
    p.C = std::move(C);
    p.c_tail = tail_upper(field, N, 1);

    std::vector<FieldElement> bps{FieldElement::rational(field, 0), fe_one(field)};
    for (unsigned n = 1; n <= N; ++n) {
        for (const FieldElement* v : {&p.r[n], &p.l[n]})
            if (v->sign() > 0 && (*v - fe_one(field)).sign() < 0) bps.push_back(*v);
    }
    sort_dedup(bps);
    p.breakpoints = std::move(bps);

    // the raw series is transfer-invariant but its integral is not 1 in
    // general; divide the table by the exact integral (for integer beta the
    // series is identically 1, so this is an exact no-op)
    std::vector<FieldElement> raw;
    FieldElement Z = FieldElement::rational(field, 0);
    for (size_t i = 0; i + 1 < p.breakpoints.size(); ++i) {
        raw.push_back(raw_st_series(p, p.breakpoints[i]));
        Z += raw.back() * (p.breakpoints[i + 1] - p.breakpoints[i]);
    }
    Rat prec(1, Int(1) << 40);
    Rat z_lo = Z.enclosure(prec).lo;
    Rat z_lo_true = z_lo - p.c_tail;  // lower bound for the untruncated integral
    if (z_lo_true <= 0) throw DensityError("st_profile: integral not certified positive");
    Rat h_up(1);
    for (const auto& v : raw) {
        Rat u = v.enclosure(prec).hi;
        if (u > h_up) h_up = u;
    }
    // |h/Z - h_N/Z_N| <= tau/Z + |h_N| tau/(Z Z_N) with tau = c_tail and
    // |Z - Z_N| <= tau (the tail integrates over a measure-1 interval)
    p.eval_tail = p.c_tail * (Rat(1) + h_up / z_lo) / z_lo_true;
    p.normalizer = std::move(Z);
    for (auto& v : raw) p.values.push_back(v / p.normalizer);
    return p;
}

DensityValue eval_density(const StDensityProfile& p, const FieldElement& x) {
    if (x.sign() < 0 || (x - fe_one(p.field)).sign() > 0)
        throw DensityError("eval_density: point outside [0,1]");
    return {raw_st_series(p, x) / p.normalizer, p.eval_tail};
}

DigitMachinery digit_machinery(const StDensityProfile& p) {
    DigitMachinery m;
    m.field = p.field;
    m.map = p.map;
    m.digits = digit_set(p.field);
    m.r1 = p.r[1];
    m.l1 = p.l[1];
    FieldElement b = FieldElement::beta(p.field);
    for (unsigned n = 0; n + 1 <= p.N; ++n) {
        m.alpha_r.push_back(b * p.r[n] - p.r[n + 1]);
        m.alpha_l.push_back(b * p.l[n] - p.l[n + 1]);
    }
    return m;
}

std::vector<FieldElement> digit_selector(const DigitMachinery& m, const FieldElement& x) {
    FieldElement b = FieldElement::beta(m.field);
    std::vector<FieldElement> out;
    for (const auto& [y, idx] : m.map.preimages(x)) {
        if (m.map.branches()[idx].is_singleton()) continue;
        out.push_back(b * y - x);
    }
    sort_dedup(out);
    return out;
}

std::pair<Int, Int> e_terms(const DigitMachinery& m, const FieldElement& x, unsigned n) {
    if (n < 1 || n >= m.alpha_r.size())
        throw DensityError("e_terms: n out of range (need 1 <= n <= N-1)");
    Int fl = FieldElement::beta(m.field).floor();
    std::vector<FieldElement> Dx = digit_selector(m, x);

    Int ep = 0;
    for (const auto& d : Dx)
        if ((d - m.alpha_r[n]).sign() > 0) ep += 1;
    if (m.alpha_r[n] == FieldElement::rational(m.field, Rat(fl - 1)) && (x - m.l1).sign() >= 0)
        ep -= 1;

    Int em = 0;
    for (const auto& d : Dx)
        if ((d - m.alpha_l[n]).sign() < 0) em += 1;
    if (m.alpha_l[n] == FieldElement::beta(m.field) - Rat(1) && (x - m.r1).sign() < 0) em -= 1;

    return {std::move(ep), std::move(em)};
}

bool key_equality(const DigitMachinery& m, const StDensityProfile& p, const FieldElement& x,
                  unsigned n) {
    if (n < 1 || n + 1 > p.N) throw DensityError("key_equality: n out of range");
    auto dn = [&](const FieldElement& y, unsigned k) {
        return Int(((y - p.r[k]).sign() >= 0 ? 1 : 0) + ((y - p.l[k]).sign() < 0 ? 1 : 0));
    };
    Int lhs = 0;
    for (const auto& [y, idx] : m.map.preimages(x)) {
        if (m.map.branches()[idx].is_singleton()) continue;
        lhs += dn(y, n);
    }
    auto [ep, em] = e_terms(m, x, n);
    Int rhs = ep + em + dn(x, n + 1);
    return lhs == rhs;
}

FieldElement transfer_residual(const PLMap& map, const DensityFn& h,
                               const std::vector<FieldElement>& breakpoints,
                               const std::vector<FieldElement>& samples) {
    const NumberField& field = map.field();
    FieldElement best = FieldElement::rational(field, 0);
    for (const FieldElement& x : samples) {
        for (const FieldElement& bp : breakpoints)
            if (x == bp)
                throw SampleOnBreakpoint("transfer_residual: sample " + x.to_string() +
                                         " is a breakpoint");
        FieldElement acc = FieldElement::rational(field, 0);
        for (const auto& [y, idx] : map.preimages(x)) {
            const Branch& br = map.branches()[idx];
            if (br.is_singleton()) continue;
            acc += h(y) / br.slope.abs();
        }
        FieldElement res = (acc - h(x)).abs();
        if ((res - best).sign() > 0) best = std::move(res);
    }
    return best;
}

FieldElement transfer_residual(const StDensityProfile& p, const std::vector<FieldElement>& xs) {
    return transfer_residual(
        p.map, [&](const FieldElement& y) { return eval_density(p, y).value; }, p.breakpoints, xs);
}

FieldElement transfer_residual(const ParryDensity& p, const std::vector<FieldElement>& xs) {
    std::vector<FieldElement> bps = p.orbit_of_one;
    bps.push_back(FieldElement::rational(p.field, 0));
    sort_dedup(bps);
    return transfer_residual(
        p.map, [&](const FieldElement& y) { return eval_parry(p, y).value; }, bps, xs);
}

DensityValue normalize_check(const StDensityProfile& p) {
    FieldElement I = FieldElement::rational(p.field, 0);
    for (size_t i = 0; i + 1 < p.breakpoints.size(); ++i)
        I += p.values[i] * (p.breakpoints[i + 1] - p.breakpoints[i]);
    return {std::move(I), p.eval_tail};
}

DensityValue normalize_check(const ParryDensity& p) {
    std::vector<FieldElement> bps;
    bps.push_back(FieldElement::rational(p.field, 0));
    bps.push_back(fe_one(p.field));
    for (const auto& v : p.orbit_of_one)
        if (v.sign() > 0 && (v - fe_one(p.field)).sign() < 0) bps.push_back(v);
    sort_dedup(bps);
    FieldElement I = FieldElement::rational(p.field, 0);
    for (size_t i = 0; i + 1 < bps.size(); ++i)
        I += eval_parry(p, bps[i]).value * (bps[i + 1] - bps[i]);
    Rat prec(1, Int(1) << 40);
    Rat f_lo = p.normalizer.enclosure(prec).lo;
    return {std::move(I), p.series_tail * 2 / f_lo};
}

BoundsReport bounds_check(const StDensityProfile& p) {
    FieldElement b = FieldElement::beta(p.field);
    BoundsReport rep;
    rep.beta_at_least_two = (b - Rat(2)).sign() >= 0;
    rep.lower = (b - Rat(2)) / (b - Rat(1));
    rep.upper = b / (b - Rat(1));
    rep.passed = true;
    for (size_t i = 0; i < p.values.size(); ++i) {
        const FieldElement& v = p.values[i];
        if (i == 0) {
            rep.min_value = v;
            rep.max_value = v;
        } else {
            if ((v - rep.min_value).sign() < 0) rep.min_value = v;
            if ((v - rep.max_value).sign() > 0) rep.max_value = v;
        }
        // below 2 the two-sided bound is vacuous on the left; the meaningful
        // failure mode is a subinterval where the density is not positive
        bool low = rep.beta_at_least_two ? (v - rep.lower + p.eval_tail).sign() < 0
                                         : (v - p.eval_tail).sign() <= 0;
        bool high = (v - rep.upper - p.eval_tail).sign() > 0;
        if (low || high) {
            rep.passed = false;
            rep.violations.push_back(i);
        }
    }
    return rep;
}

ExpansionReport expansion_identities(const StDensityProfile& p) {
    const NumberField& f = p.field;
    FieldElement b = FieldElement::beta(f);
    FieldElement inv_b = fe_one(f) / b;
    FieldElement sr = FieldElement::rational(f, 0), sl = sr;
    FieldElement pw = fe_one(f);
    for (unsigned n = 1; n <= p.N; ++n) {
        pw *= inv_b;
        sr += (b * p.r[n - 1] - p.r[n]) * pw;
        sl += (b * p.l[n - 1] - p.l[n]) * pw;
    }
    ExpansionReport rep;
    rep.r_defect = (p.r[0] - sr).abs();
    rep.l_defect = (p.l[0] - sl).abs();
    // digits are bounded by beta, so the discarded tail is at most
    // beta * beta^-N / (beta - 1); bound beta above by floor(beta) + 1
    rep.tail = tail_upper(f, p.N, 1) * Rat(b.floor() + 1);
    rep.passed = (rep.r_defect - rep.tail).sign() <= 0 && (rep.l_defect - rep.tail).sign() <= 0;
    return rep;
}

}  // namespace pisotdyn
