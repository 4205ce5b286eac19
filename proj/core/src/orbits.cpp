#include "pisotdyn/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace pisotdyn {

ExactOrbit iterate_exact(const PLMap& map, const FieldElement& x0, size_t n) {
    ExactOrbit o;
    o.points.reserve(n + 1);
    o.theta.reserve(n + 1);
    o.itinerary.reserve(n);
    o.points.push_back(x0);
    o.theta.push_back(0);
    FieldElement x = x0;
    for (size_t h = 0; h < n; ++h) {
        auto [y, i] = map.apply(x);
        o.itinerary.push_back(i);
        o.theta.push_back(o.theta.back() + map.branches()[i].m);
        o.points.push_back(y);
        x = std::move(y);
    }
    return o;
}

Int lattice_point_bound(const PLMap& map, const FieldElement& x0) {
    const NumberField& field = map.field();
    Int L = x0.coordinate_denominator();
    for (const Branch& br : map.branches()) {
        Int lb = br.b.coordinate_denominator();
        Int g;
        mpz_lcm(g.backend().data(), L.backend().data(), lb.backend().data());
        L = g;
    }
    if (field.is_trivial()) return L + 1;

    std::vector<Rat> A = conjugate_bound(field, map.intercepts());
    std::vector<size_t> others = field.other_conjugates();
    size_t d = static_cast<size_t>(field.degree());
    std::vector<Rat> B(d);
    B[field.distinguished_index()] = 1;
    Rat prec(1, Int(1) << 40);
    for (size_t k = 0; k < others.size(); ++k) {
        size_t i = others[k];
        Rat c = field.conjugate(i, prec).abs_upper();
        if (c >= 1) return 0;  // not Pisot: no finite box for the orbit
        // |phi_i| along the orbit is at most |phi_i(x0)| + A_i / (1 - |phi_i(beta)|)
        B[i] = x0.embedding(i, prec).abs_upper() + A[k] / (Rat(1) - c);
    }
    std::vector<Rat> C = coordinate_bounds(field, B);
    Int count = 1;
    for (const Rat& c : C) count *= 2 * floor_rat(Rat(L) * c) + 1;
    return count;
}

PeriodicityCertificate detect_eventual_period(const PLMap& map, const FieldElement& x0,
                                              size_t step_budget) {
    std::unordered_map<std::string, size_t> seen;
    FieldElement x = x0;
    for (size_t h = 0; h <= step_budget; ++h) {
        auto [it, fresh] = seen.emplace(x.key(), h);
        if (!fresh) {
            PeriodicityCertificate c;
            c.preperiod = it->second;
            c.period = h - it->second;
            c.steps_used = h;
            FieldElement w = x0;
            for (size_t j = 0; j < c.preperiod; ++j) w = map.apply(w).first;
            c.witness = std::move(w);
            return c;
        }
        x = map.apply(x).first;
    }
    Int bound = lattice_point_bound(map, x0);
    throw BudgetExceeded("detect_eventual_period: no repeat within " +
                             std::to_string(step_budget) + " steps (a-priori bound " +
                             (bound > 0 ? bound.str() : std::string("unavailable")) + ")",
                         bound);
}

namespace {

struct NumericBranch {
    RatInterval left, right, slope, intercept;
    bool left_closed, right_closed;
};

NumericOrbit run_numeric(const PLMap& map, const SeedFn& seed, size_t n, unsigned bits) {
    Rat endpoint_w(1, Int(1) << (bits + 8));
    std::vector<NumericBranch> nb;
    nb.reserve(map.branches().size());
    for (const Branch& br : map.branches())
        nb.push_back({br.left.enclosure(endpoint_w), br.right.enclosure(endpoint_w),
                      br.slope.enclosure(endpoint_w), br.b.enclosure(endpoint_w),
                      br.left_closed, br.right_closed});

    NumericOrbit o;
    o.bits = bits;
    RatInterval x = seed(bits).rounded(bits);
    o.points.push_back(x);
    for (size_t h = 0; h < n; ++h) {
        const NumericBranch* own = nullptr;
        size_t idx = 0;
        for (size_t i = 0; i < nb.size(); ++i) {
            const NumericBranch& b = nb[i];
            bool inl = b.left_closed ? x.lo >= b.left.hi : x.lo > b.left.hi;
            bool inr = b.right_closed ? x.hi <= b.right.lo : x.hi < b.right.lo;
            if (inl && inr) {
                own = &b;
                idx = i;
                break;
            }
        }
        if (!own) break;  // membership ambiguous: stop honestly
        RatInterval y = (own->slope * x + own->intercept).rounded(bits);
        if (y.lo < 0) y.lo = 0;  // the true point stays in [0,1]
        if (y.hi > 1) y.hi = 1;
        o.points.push_back(y);
        o.itinerary.push_back(idx);
        o.valid_prefix = h + 1;
        x = std::move(y);
    }
    return o;
}

}  // namespace

NumericOrbit iterate_numeric(const PLMap& map, const SeedFn& seed, size_t n,
                             unsigned working_precision, bool auto_raise, unsigned max_bits) {
    unsigned bits = std::max(working_precision, 16u);
    while (true) {
        NumericOrbit o = run_numeric(map, seed, n, bits);
        if (o.valid_prefix == n || !auto_raise) return o;
        if (bits >= max_bits)
            throw PrecisionExhausted("iterate_numeric: valid prefix " +
                                     std::to_string(o.valid_prefix) + " of " + std::to_string(n) +
                                     " at " + std::to_string(bits) + " bits");
        bits *= 2;
    }
}

NumericOrbit iterate_numeric(const PLMap& map, const Rat& x0, size_t n,
                             unsigned working_precision, bool auto_raise, unsigned max_bits) {
    return iterate_numeric(
        map, [&](unsigned) { return RatInterval(x0, x0); }, n, working_precision, auto_raise,
        max_bits);
}

std::vector<double> occupation_histogram(const std::vector<FieldElement>& points, size_t bins) {
    if (points.empty()) throw EmptyOrbit("occupation_histogram: no points");
    if (bins == 0) throw OrbitError("occupation_histogram: bin count must be positive");
    std::vector<double> freq(bins, 0.0);
    Rat b(bins);
    for (const FieldElement& p : points) {
        Int k = (p * b).floor();
        if (k == Int(bins)) k -= 1;  // x = 1 goes to the closed last bin
        if (k < 0 || k >= Int(bins)) throw OrbitError("occupation_histogram: point outside [0,1]");
        freq[static_cast<size_t>(k)] += 1.0;
    }
    for (double& f : freq) f /= static_cast<double>(points.size());
    return freq;
}

std::vector<double> occupation_histogram(const std::vector<double>& points, size_t bins) {
    if (points.empty()) throw EmptyOrbit("occupation_histogram: no points");
    if (bins == 0) throw OrbitError("occupation_histogram: bin count must be positive");
    std::vector<double> freq(bins, 0.0);
    for (double p : points) {
        if (p < 0.0 || p > 1.0) throw OrbitError("occupation_histogram: point outside [0,1]");
        auto k = static_cast<long>(std::floor(p * static_cast<double>(bins)));
        if (k == static_cast<long>(bins)) k -= 1;
        freq[static_cast<size_t>(k)] += 1.0;
    }
    for (double& f : freq) f /= static_cast<double>(points.size());
    return freq;
}

}  // namespace pisotdyn
