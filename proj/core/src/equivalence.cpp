#include "pisotdyn/equivalence.hpp"

#include <algorithm>
#include <cmath>

namespace pisotdyn {

namespace {

FieldElement fe(const NumberField& f, const Rat& r) { return FieldElement::rational(f, r); }

bool window_contains(const WindowEnumeration& w, const FieldElement& x) {
    auto it = std::lower_bound(w.elements.begin(), w.elements.end(), x,
                               [](const FieldElement& a, const FieldElement& b) { return a < b; });
    return it != w.elements.end() && *it == x;
}

void require_same_field(const PLMap& T, const PLMap& S, const FieldElement& x0) {
    if (!T.field().same_as(S.field()) || !x0.field().same_as(T.field()))
        throw FieldMismatch("coupling: maps and seed must share one field");
}

/// Appends step indices where some k-value repeats more than M times.
void check_counting(const std::vector<size_t>& k, unsigned M, std::vector<size_t>& violations) {
    size_t kmax = 0;
    for (size_t v : k) kmax = std::max(kmax, v);
    std::vector<unsigned> count(kmax + 1, 0);
    for (size_t n = 0; n < k.size(); ++n)
        if (++count[k[n]] > M) violations.push_back(n);
}

Rat midpoint(const FieldElement& x) {
    RatInterval e = x.enclosure(Rat(1, Int(1) << 80));
    return (e.lo + e.hi) / 2;
}

/// Exact bin masses of a piecewise-constant density given as breakpoints
/// b_0 = 0 < ... < b_r = 1 and values on [b_i, b_{i+1}).
std::vector<Rat> table_bin_masses(const NumberField& field,
                                  const std::vector<FieldElement>& breakpoints,
                                  const std::vector<FieldElement>& values, unsigned bins) {
    std::vector<Rat> out(bins);
    for (unsigned i = 0; i < bins; ++i) {
        FieldElement lo = fe(field, Rat(i, Int(bins)));
        FieldElement hi = fe(field, Rat(i + 1, Int(bins)));
        FieldElement mass = fe(field, 0);
        for (size_t s = 0; s + 1 < breakpoints.size(); ++s) {
            const FieldElement& a = (breakpoints[s] - lo).sign() > 0 ? breakpoints[s] : lo;
            const FieldElement& b = (breakpoints[s + 1] - hi).sign() < 0 ? breakpoints[s + 1] : hi;
            if ((b - a).sign() > 0) mass += values[s] * (b - a);
        }
        out[i] = midpoint(mass);
    }
    return out;
}

}  // namespace

bool Interval::contains(const FieldElement& x) const {
    return (x - lo).sign() >= 0 && (x - hi).sign() <= 0;
}

IntervalUnion IntervalUnion::make(std::vector<Interval> parts) {
    parts.erase(std::remove_if(parts.begin(), parts.end(),
                               [](const Interval& p) { return (p.hi - p.lo).sign() < 0; }),
                parts.end());
    std::sort(parts.begin(), parts.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    IntervalUnion u;
    for (Interval& p : parts) {
        if (!u.components.empty() && (p.lo - u.components.back().hi).sign() <= 0) {
            if ((p.hi - u.components.back().hi).sign() > 0)
                u.components.back().hi = std::move(p.hi);
        } else {
            u.components.push_back(std::move(p));
        }
    }
    return u;
}

FieldElement IntervalUnion::measure() const {
    if (components.empty()) throw EquivalenceError("IntervalUnion: empty union has no field");
    FieldElement m = fe(components[0].lo.field(), 0);
    for (const Interval& c : components) m += c.hi - c.lo;
    return m;
}

bool IntervalUnion::contains(const FieldElement& x) const {
    for (const Interval& c : components)
        if (c.contains(x)) return true;
    return false;
}

DigitSet coupling_digits(const PLMap& S) {
    const NumberField& f = S.field();
    std::vector<FieldElement> e;
    for (const FieldElement& b : S.intercepts()) {
        e.push_back(b);
        e.push_back(-b);
    }
    Int fl = FieldElement::beta(f).floor();
    for (Int i = 0; i <= fl; ++i) e.push_back(fe(f, Rat(i)));
    return DigitSet::make(f, std::move(e));
}

WindowEnumeration coupling_window(const PLMap& S) {
    const NumberField& f = S.field();
    WindowEnumeration w = enumerate_window(coupling_digits(S).difference(), fe(f, -1), fe(f, 2),
                                           EnumMethod::LatticeBox);
    if (w.elements.empty()) throw EmptyWindow("coupling_window: enumeration came back empty");
    return w;
}

CouplingReport coupling_forward(const PLMap& T, const PLMap& S, const FieldElement& x0, size_t N,
                                const WindowEnumeration& window) {
    require_same_field(T, S, x0);
    CouplingReport rep;
    rep.direction = Direction::Forward;
    rep.M = S.max_m();
    rep.window_size = window.elements.size();

    std::vector<FieldElement> torb{x0};
    auto t_at = [&](size_t idx) -> const FieldElement& {
        while (torb.size() <= idx) torb.push_back(T.apply(torb.back()).first);
        return torb[idx];
    };

    FieldElement s = x0;
    size_t theta = 0;
    int eps = 1;
    for (size_t n = 0; n <= N; ++n) {
        rep.k.push_back(theta);
        FieldElement off = eps > 0 ? t_at(theta) - s : t_at(theta) + s;
        if (!window_contains(window, off))
            throw OffsetOutsideWindow("coupling_forward: offset " + off.to_string() +
                                      " missing from the window at step " + std::to_string(n));
        rep.offsets.push_back(std::move(off));
        if (n > 0) {
            size_t dk = rep.k[n] - rep.k[n - 1];
            if (rep.k[n] < rep.k[n - 1] || dk < 1 || dk > rep.M) rep.violations.push_back(n);
        }
        if (rep.k[n] > rep.M * std::max<size_t>(1, n)) rep.violations.push_back(n);
        if (n < N) {
            auto [y, idx] = S.apply(s);
            const Branch& br = S.branches()[idx];
            theta += br.m;
            eps *= br.epsilon;
            s = std::move(y);
        }
    }
    check_counting(rep.k, rep.M, rep.violations);
    return rep;
}

CouplingReport coupling_reverse(const PLMap& T, const PLMap& S, const FieldElement& x0, size_t N,
                                const WindowEnumeration& window) {
    require_same_field(T, S, x0);
    CouplingReport rep;
    rep.direction = Direction::Reverse;
    rep.M = S.max_m();
    rep.window_size = window.elements.size();

    // S-orbit with cumulative exponents theta_k and affine signs sigma_k
    std::vector<FieldElement> sorb{x0};
    std::vector<size_t> theta{0};
    std::vector<int> sigma{1};
    while (theta.back() <= N) {
        auto [y, idx] = S.apply(sorb.back());
        const Branch& br = S.branches()[idx];
        theta.push_back(theta.back() + br.m);
        sigma.push_back(sigma.back() * br.epsilon);
        sorb.push_back(std::move(y));
    }
    std::vector<FieldElement> torb{x0};
    for (size_t n = 0; n < N; ++n) torb.push_back(T.apply(torb.back()).first);

    size_t kk = 0;
    for (size_t n = 0; n <= N; ++n) {
        while (kk + 1 < theta.size() && theta[kk + 1] <= n) ++kk;
        size_t j = n - theta[kk];
        rep.k.push_back(kk);
        rep.j.push_back(static_cast<unsigned>(j));
        if (j >= rep.M) rep.violations.push_back(n);
        FieldElement off = sigma[kk] > 0 ? sorb[kk] - torb[n - j] : sorb[kk] + torb[n - j];
        if (!window_contains(window, off))
            throw OffsetOutsideWindow("coupling_reverse: offset " + off.to_string() +
                                      " missing from the window at step " + std::to_string(n));
        rep.offsets.push_back(std::move(off));
        if (n > 0 && (rep.k[n] < rep.k[n - 1] || rep.k[n] - rep.k[n - 1] > 1))
            rep.violations.push_back(n);
        if (rep.k[n] > rep.M * std::max<size_t>(1, n)) rep.violations.push_back(n);
    }
    check_counting(rep.k, rep.M, rep.violations);
    return rep;
}

IntervalUnion interval_preimage(const PLMap& T, const IntervalUnion& U) {
    std::vector<Interval> parts;
    for (const Branch& br : T.branches()) {
        if (br.is_singleton()) continue;
        for (const Interval& c : U.components) {
            FieldElement y1 = (c.lo - br.b) / br.slope;
            FieldElement y2 = (c.hi - br.b) / br.slope;
            if (br.epsilon < 0) std::swap(y1, y2);
            // closed hull of the branch interval; endpoint overlap is null
            FieldElement lo = (y1 - br.left).sign() > 0 ? y1 : br.left;
            FieldElement hi = (y2 - br.right).sign() < 0 ? y2 : br.right;
            if ((hi - lo).sign() >= 0) parts.push_back({std::move(lo), std::move(hi)});
        }
    }
    return IntervalUnion::make(std::move(parts));
}

TildeSet tilde_set(const Interval& I, const std::vector<FieldElement>& window, unsigned M,
                   Direction direction, const PLMap& T) {
    if (window.empty()) throw EmptyWindow("tilde_set: empty window");
    const NumberField& f = T.field();
    FieldElement zero = fe(f, 0), one = fe(f, 1);

    std::vector<IntervalUnion> layers;  // T^-j(I) for j = 0..M-1 (forward: just I)
    layers.push_back(IntervalUnion::make({I}));
    if (direction == Direction::Reverse)
        for (unsigned j = 1; j < M; ++j) layers.push_back(interval_preimage(T, layers.back()));

    std::vector<Interval> parts;
    for (const IntervalUnion& layer : layers) {
        for (const Interval& c : layer.components) {
            for (const FieldElement& t : window) {
                for (int refl = 0; refl < 2; ++refl) {
                    FieldElement a = refl ? t - c.hi : c.lo + t;
                    FieldElement b = refl ? t - c.lo : c.hi + t;
                    if ((a - zero).sign() < 0) a = zero;
                    if ((b - one).sign() > 0) b = one;
                    if ((b - a).sign() >= 0) parts.push_back({std::move(a), std::move(b)});
                }
            }
        }
    }

    TildeSet ts;
    ts.set = IntervalUnion::make(std::move(parts));
    ts.measure = ts.set.components.empty() ? zero : ts.set.measure();
    FieldElement worst = layers[0].components.empty() ? zero : layers[0].measure();
    for (const IntervalUnion& layer : layers) {
        FieldElement m = layer.components.empty() ? zero : layer.measure();
        if ((m - worst).sign() > 0) worst = m;
    }
    ts.bound = worst * Rat(2 * window.size() * layers.size());
    ts.certificate_ok = (ts.measure - ts.bound).sign() <= 0;
    return ts;
}

size_t membership_implication_check(const PLMap& T, const PLMap& S, const FieldElement& x0,
                                    const CouplingReport& rep, const Interval& I,
                                    const IntervalUnion& tilde) {
    require_same_field(T, S, x0);
    if (rep.k.empty()) throw EquivalenceError("membership_implication_check: empty report");
    size_t N = rep.k.size() - 1;
    size_t violations = 0;
    if (rep.direction == Direction::Forward) {
        std::vector<FieldElement> torb{x0};
        auto t_at = [&](size_t idx) -> const FieldElement& {
            while (torb.size() <= idx) torb.push_back(T.apply(torb.back()).first);
            return torb[idx];
        };
        FieldElement s = x0;
        for (size_t n = 0; n <= N; ++n) {
            if (I.contains(s) && !tilde.contains(t_at(rep.k[n]))) ++violations;
            if (n < N) s = S.apply(s).first;
        }
    } else {
        size_t kmax = 0;
        for (size_t v : rep.k) kmax = std::max(kmax, v);
        std::vector<FieldElement> sorb{x0};
        while (sorb.size() <= kmax) sorb.push_back(S.apply(sorb.back()).first);
        FieldElement t = x0;
        for (size_t n = 0; n <= N; ++n) {
            if (I.contains(t) && !tilde.contains(sorb[rep.k[n]])) ++violations;
            if (n < N) t = T.apply(t).first;
        }
    }
    return violations;
}

Rat birkhoff_frequency(const std::vector<FieldElement>& orbit, const Interval& I) {
    if (orbit.empty()) throw EquivalenceError("birkhoff_frequency: empty orbit");
    Int hits = 0;
    for (const FieldElement& p : orbit)
        if (I.contains(p)) hits += 1;
    return Rat(hits, Int(orbit.size()));
}

double star_discrepancy(std::vector<double> points, const std::function<double(double)>& cdf) {
    if (points.empty()) throw EquivalenceError("star_discrepancy: no points");
    std::sort(points.begin(), points.end());
    double n = static_cast<double>(points.size());
    double best = 0.0;
    for (size_t i = 0; i < points.size(); ++i) {
        double F = cdf(points[i]);
        best = std::max(best, std::max(F - static_cast<double>(i) / n,
                                       static_cast<double>(i + 1) / n - F));
    }
    return best;
}

Rat interval_frequency(const PLMap& map, const FieldElement& x0, size_t n_begin, size_t n_end,
                       const Interval& I) {
    if (n_end <= n_begin) throw EquivalenceError("interval_frequency: empty step range");
    FieldElement x = x0;
    Int hits = 0;
    for (size_t n = 0; n < n_end; ++n) {
        if (n >= n_begin && I.contains(x)) hits += 1;
        if (n + 1 < n_end) x = map.apply(x).first;
    }
    return Rat(hits, Int(n_end - n_begin));
}

std::vector<Rat> lebesgue_bin_masses(unsigned bins) {
    return std::vector<Rat>(bins, Rat(1, Int(bins)));
}

std::vector<Rat> parry_bin_masses(const ParryDensity& p, unsigned bins) {
    std::vector<FieldElement> bps{fe(p.field, 0), fe(p.field, 1)};
    for (const FieldElement& v : p.orbit_of_one)
        if (v.sign() > 0 && (v - fe(p.field, 1)).sign() < 0) bps.push_back(v);
    std::sort(bps.begin(), bps.end(), [](const FieldElement& a, const FieldElement& b) {
        if (a == b) return false;
        return a < b;
    });
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    std::vector<FieldElement> vals;
    for (size_t i = 0; i + 1 < bps.size(); ++i) vals.push_back(eval_parry(p, bps[i]).value);
    return table_bin_masses(p.field, bps, vals, bins);
}

std::vector<Rat> profile_bin_masses(const StDensityProfile& p, unsigned bins) {
    return table_bin_masses(p.field, p.breakpoints, p.values, bins);
}

GenericReport generic_report(const PLMap& T, const std::vector<Rat>& ref_T, const PLMap& S,
                             const std::vector<Rat>& ref_S, const FieldElement& x0, size_t N,
                             unsigned bins, size_t coupling_steps) {
    require_same_field(T, S, x0);
    if (bins == 0 || N == 0) throw EquivalenceError("generic_report: empty run");
    if (ref_T.size() != bins || ref_S.size() != bins)
        throw EquivalenceError("generic_report: reference mass count must equal bins");

    GenericReport rep;
    rep.label_T = T.label();
    rep.label_S = S.label();
    rep.N = N;
    rep.bins = bins;
    rep.seed = x0.to_decimal(40);
    rep.ref_T = ref_T;
    rep.ref_S = ref_S;

    auto run = [&](const PLMap& map) {
        std::vector<Int> counts(bins, Int(0));
        FieldElement x = x0;
        Rat b(bins);
        for (size_t n = 0; n < N; ++n) {
            Int k = (x * b).floor();
            if (k == Int(bins)) k -= 1;
            if (k < 0 || k >= Int(bins))
                throw EquivalenceError("generic_report: orbit left [0,1]");
            counts[static_cast<size_t>(k)] += 1;
            if (n + 1 < N) x = map.apply(x).first;
        }
        std::vector<Rat> freq(bins);
        for (unsigned i = 0; i < bins; ++i) freq[i] = Rat(counts[i], Int(N));
        return freq;
    };
    rep.hist_T = run(T);
    rep.hist_S = run(S);

    auto compare = [&](const std::vector<Rat>& hist, const std::vector<Rat>& ref, Rat& sup,
                       Rat& ratio) {
        sup = 0;
        ratio = 0;
        for (unsigned i = 0; i < bins; ++i) {
            Rat d = abs_rat(hist[i] - ref[i]);
            if (d > sup) sup = d;
            if (ref[i] > 0 && hist[i] / ref[i] > ratio) ratio = hist[i] / ref[i];
        }
    };
    compare(rep.hist_T, rep.ref_T, rep.sup_T, rep.max_ratio_T);
    compare(rep.hist_S, rep.ref_S, rep.sup_S, rep.max_ratio_S);

    rep.M = S.max_m();
    if (coupling_steps > 0) {
        WindowEnumeration w = coupling_window(S);
        CouplingReport fwd = coupling_forward(T, S, x0, coupling_steps, w);
        CouplingReport rev = coupling_reverse(T, S, x0, coupling_steps, w);
        rep.coupling_N = coupling_steps;
        rep.coupling_violations = fwd.violations.size() + rev.violations.size();
    }
    return rep;
}

}  // namespace pisotdyn
