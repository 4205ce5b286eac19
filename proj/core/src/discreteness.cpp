#include "pisotdyn/discreteness.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace pisotdyn {

namespace {

void sort_dedup(std::vector<FieldElement>& v) {
    std::sort(v.begin(), v.end(), [](const FieldElement& a, const FieldElement& b) {
        if (a == b) return false;
        return a < b;
    });
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

void require_pisot(const NumberField& field, const char* who) {
    if (classify(field) != BetaClass::Pisot)
        throw NotPisot(std::string(who) + ": field is not certified Pisot");
}

}  // namespace

DigitSet DigitSet::make(NumberField field, std::vector<FieldElement> elements) {
    for (const auto& e : elements)
        if (!e.field().same_as(field)) throw FieldMismatch("DigitSet: element from another field");
    sort_dedup(elements);
    Int L = 1;
    for (const auto& e : elements) {
        Int l = e.coordinate_denominator();
        Int g;
        mpz_lcm(g.backend().data(), L.backend().data(), l.backend().data());
        L = g;
    }
    return {std::move(field), std::move(elements), std::move(L)};
}

DigitSet DigitSet::difference() const {
    std::vector<FieldElement> diff;
    if (elements.empty()) {
        diff.push_back(FieldElement::rational(field, 0));
    } else {
        diff.reserve(elements.size() * elements.size());
        for (const auto& a : elements)
            for (const auto& b : elements) diff.push_back(a - b);
    }
    return make(field, std::move(diff));
}

bool DigitSet::contains(const FieldElement& x) const {
    for (const auto& e : elements)
        if (e == x) return true;
    return false;
}

Rat separation_bound(const DigitSet& diff) {
    require_pisot(diff.field, "separation_bound");
    bool has_zero = false;
    for (const auto& e : diff.elements) has_zero = has_zero || e.is_zero();
    if (!has_zero) throw DiscretenessError("separation_bound: difference set must contain 0");

    Rat R(1);
    for (int i = 0; i < diff.field.degree(); ++i) R /= Rat(diff.L);
    if (diff.field.is_trivial()) return R;

    std::vector<Rat> A = conjugate_bound(diff.field, diff.elements);
    std::vector<size_t> others = diff.field.other_conjugates();
    Rat prec(1, Int(1) << 40);
    for (size_t k = 0; k < others.size(); ++k) {
        if (A[k] == 0) continue;  // that embedding of every sum vanishes
        Rat u = diff.field.conjugate(others[k], prec).abs_upper();
        if (u >= 1) throw NotPisot("separation_bound: conjugate modulus not below 1");
        R *= (Rat(1) - u) / A[k];
    }
    return R;
}

namespace {

WindowEnumeration lattice_box(const DigitSet& E, const FieldElement& lo, const FieldElement& hi) {
    const NumberField& field = E.field;
    size_t d = static_cast<size_t>(field.degree());
    FieldElement blo = lo, bhi = hi;

    // box in the Minkowski embedding: window bound at the distinguished
    // place, geometric-series bound A_i/(1-|beta^(i)|) elsewhere
    Rat prec(1, Int(1) << 40);
    std::vector<Rat> B(d);
    RatInterval il = lo.enclosure(prec), ih = hi.enclosure(prec);
    B[field.distinguished_index()] = std::max(std::max(abs_rat(il.lo), abs_rat(il.hi)),
                                              std::max(abs_rat(ih.lo), abs_rat(ih.hi)));
    std::vector<Rat> A =
        E.elements.empty() ? std::vector<Rat>() : conjugate_bound(field, E.elements);
    std::vector<size_t> others = field.other_conjugates();
    for (size_t k = 0; k < others.size(); ++k) {
        Rat u = field.conjugate(others[k], prec).abs_upper();
        if (u >= 1) throw NotPisot("enumerate_window: conjugate modulus not below 1");
        B[others[k]] = A.empty() ? Rat(0) : A[k] / (Rat(1) - u);
    }

    std::vector<Rat> C = coordinate_bounds(field, B);
    std::vector<Int> lim(d);
    for (size_t j = 0; j < d; ++j) lim[j] = floor_rat(Rat(E.L) * C[j]);

    // precompute beta^j / L
    std::vector<FieldElement> basis(d);
    FieldElement b = FieldElement::beta(field);
    FieldElement pw = FieldElement::rational(field, Rat(1, E.L));
    for (size_t j = 0; j < d; ++j) {
        basis[j] = pw;
        pw *= b;
    }

    WindowEnumeration out;
    out.lo = lo;
    out.hi = hi;
    out.method = EnumMethod::LatticeBox;
    out.is_superset = true;

    std::vector<Int> n(d);
    for (size_t j = 0; j < d; ++j) n[j] = -lim[j];
    while (true) {
        FieldElement x = FieldElement::rational(field, 0);
        for (size_t j = 0; j < d; ++j)
            if (n[j] != 0) x += basis[j] * Rat(n[j]);
        bool keep = (x - lo).sign() >= 0 && (x - hi).sign() <= 0;
        // drop a candidate only when certainly outside a conjugate bound
        for (size_t k = 0; keep && k < others.size(); ++k)
            if (x.embedding(others[k], prec).abs_lower() > B[others[k]]) keep = false;
        if (keep) out.elements.push_back(std::move(x));

        size_t j = 0;
        while (j < d && n[j] == lim[j]) {
            n[j] = -lim[j];
            ++j;
        }
        if (j == d) break;
        n[j] += 1;
    }
    sort_dedup(out.elements);
    return out;
}

WindowEnumeration digit_bfs(const DigitSet& E, const FieldElement& lo, const FieldElement& hi) {
    const NumberField& field = E.field;
    FieldElement b = FieldElement::beta(field);
    // prune once |v| > max(|a|,|b|) + A1/(beta-1): every continuation
    // beta^k v + (digits) then stays outside the window
    FieldElement amax = FieldElement::rational(field, 0);
    for (const auto& e : E.elements) {
        FieldElement ae = e.abs();
        if ((ae - amax).sign() > 0) amax = ae;
    }
    FieldElement wl = lo.abs(), wh = hi.abs();
    FieldElement P = ((wl - wh).sign() > 0 ? wl : wh) + amax / (b - Rat(1));

    WindowEnumeration out;
    out.lo = lo;
    out.hi = hi;
    out.method = EnumMethod::DigitBfs;
    out.is_superset = false;

    std::unordered_set<std::string> seen;
    std::deque<FieldElement> queue;
    for (const auto& e : E.elements)
        if (seen.insert(e.key()).second) queue.push_back(e);
    while (!queue.empty()) {
        FieldElement v = std::move(queue.front());
        queue.pop_front();
        if ((v - lo).sign() >= 0 && (v - hi).sign() <= 0) out.elements.push_back(v);
        if ((v.abs() - P).sign() > 0) continue;
        for (const auto& e : E.elements) {
            FieldElement w = b * v + e;
            if (seen.insert(w.key()).second) queue.push_back(std::move(w));
        }
    }
    sort_dedup(out.elements);
    return out;
}

}  // namespace

WindowEnumeration enumerate_window(const DigitSet& E, const FieldElement& lo,
                                   const FieldElement& hi, EnumMethod method) {
    if (!lo.field().same_as(E.field) || !hi.field().same_as(E.field))
        throw FieldMismatch("enumerate_window: window endpoints from another field");
    if ((lo - hi).sign() > 0) throw DiscretenessError("enumerate_window: empty window");
    require_pisot(E.field, "enumerate_window");
    return method == EnumMethod::LatticeBox ? lattice_box(E, lo, hi) : digit_bfs(E, lo, hi);
}

GapReport verify_min_gap(const WindowEnumeration& e, const Rat& R, bool strict) {
    GapReport rep;
    rep.count = e.elements.size();
    if (rep.count < 2) return rep;  // vacuous: min gap is +infinity
    // sorted, so adjacent gaps realize the minimum
    FieldElement mg = e.elements[1] - e.elements[0];
    for (size_t i = 2; i < e.elements.size(); ++i) {
        FieldElement g = e.elements[i] - e.elements[i - 1];
        if ((g - mg).sign() < 0) mg = g;
    }
    int cmp = (mg - R).sign();
    rep.passed = strict ? cmp > 0 : cmp >= 0;
    rep.min_gap = std::move(mg);
    if (!rep.passed)
        throw GapViolation("verify_min_gap: minimum gap " + rep.min_gap->to_decimal(10) +
                           " violates bound " + rat_to_string(R));
    return rep;
}

}  // namespace pisotdyn
