#include "pisotdyn/numberfield.hpp"

#include <algorithm>
#include <atomic>
#include <bitset>
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>
#include <sstream>

namespace pisotdyn {

namespace {

// ---------------------------------------------------------------------------
// rational polynomial helpers (coefficients ascending)

std::vector<Rat> to_rat_poly(const std::vector<Int>& p) {
    std::vector<Rat> out(p.size());
    for (size_t i = 0; i < p.size(); ++i) out[i] = Rat(p[i]);
    return out;
}

void trim(std::vector<Rat>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

template <typename Coeff>
Rat eval_poly(const std::vector<Coeff>& p, const Rat& x) {
    Rat acc = 0;
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + Rat(p[i]);
    return acc;
}

template <typename Coeff>
RatInterval eval_poly(const std::vector<Coeff>& p, const RatInterval& x) {
    RatInterval acc{0, 0};
    for (size_t i = p.size(); i-- > 0;) {
        acc = acc * x;
        acc.lo += Rat(p[i]);
        acc.hi += Rat(p[i]);
    }
    return acc;
}

template <typename Coeff>
CBall eval_poly(const std::vector<Coeff>& p, const CBall& x) {
    CBall acc = CBall::from_real(0);
    for (size_t i = p.size(); i-- > 0;) acc = acc * x + CBall::from_real(Rat(p[i]));
    return acc;
}

std::vector<Int> derivative(const std::vector<Int>& p) {
    std::vector<Int> d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Int(i));
    return d;
}

std::vector<Rat> poly_mul(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Rat> out(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// reduce modulo a monic integer polynomial
std::vector<Rat> poly_mod(std::vector<Rat> a, const std::vector<Int>& m) {
    const size_t d = m.size() - 1;
    trim(a);
    while (a.size() > d) {
        Rat lead = a.back();
        size_t shift = a.size() - 1 - d;
        for (size_t i = 0; i < d; ++i) a[shift + i] -= lead * Rat(m[i]);
        a.pop_back();
        trim(a);
    }
    a.resize(d, Rat(0));
    return a;
}

// general division with remainder over Q[x]
std::pair<std::vector<Rat>, std::vector<Rat>> poly_divmod(std::vector<Rat> a,
                                                          const std::vector<Rat>& b) {
    trim(a);
    std::vector<Rat> q(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0, Rat(0));
    while (a.size() >= b.size() && !a.empty()) {
        Rat c = a.back() / b.back();
        size_t shift = a.size() - b.size();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        trim(a);
        if (!a.empty() && a.size() >= b.size() && a.back() == 0) trim(a);
    }
    return {q, a};
}

// inverse of a modulo m (monic, irreducible) via extended Euclid
std::vector<Rat> poly_inverse(std::vector<Rat> a, const std::vector<Int>& m) {
    std::vector<Rat> r0 = to_rat_poly(m), r1 = std::move(a);
    trim(r1);
    if (r1.empty()) throw DivisionByZero("division by zero field element");
    std::vector<Rat> s0 = {}, s1 = {Rat(1)};
    while (true) {
        trim(r1);
        if (r1.size() == 1) break;  // nonzero constant: gcd reached
        auto [q, r] = poly_divmod(r0, r1);
        std::vector<Rat> s2 = s0;
        // s2 = s0 - q*s1
        std::vector<Rat> qs = poly_mul(q, s1);
        s2.resize(std::max(s2.size(), qs.size()), Rat(0));
        for (size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        if (r1.empty()) throw Reducible("minimal polynomial shares a factor with operand");
    }
    Rat c = r1[0];
    for (auto& x : s1) x /= c;
    return poly_mod(std::move(s1), m);
}

// ---------------------------------------------------------------------------
// irreducibility certificate

// arithmetic in F_p[x], p < 2^20, coefficients ascending
struct ModPoly {
    uint64_t p;
    static void trimv(std::vector<uint64_t>& v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
    }
    uint64_t inv(uint64_t a) const {
        uint64_t e = p - 2, r = 1, b = a % p;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    }
    // a mod b in place; optionally records the quotient
    void divmod(std::vector<uint64_t>& a, const std::vector<uint64_t>& b,
                std::vector<uint64_t>* quot = nullptr) const {
        uint64_t il = inv(b.back());
        if (quot) quot->assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
        while (a.size() >= b.size() && !a.empty()) {
            uint64_t c = a.back() * il % p;
            size_t shift = a.size() - b.size();
            if (quot) (*quot)[shift] = c;
            for (size_t i = 0; i < b.size(); ++i) {
                uint64_t sub = c * b[i] % p;
                a[shift + i] = (a[shift + i] + p - sub) % p;
            }
            trimv(a);
        }
    }
    std::vector<uint64_t> mulmod(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b,
                                 const std::vector<uint64_t>& mod) const {
        if (a.empty() || b.empty()) return {};
        std::vector<uint64_t> out(a.size() + b.size() - 1, 0);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
        divmod(out, mod);
        return out;
    }
    std::vector<uint64_t> powmod(std::vector<uint64_t> base, uint64_t e,
                                 const std::vector<uint64_t>& mod) const {
        std::vector<uint64_t> acc = {1};
        while (e) {
            if (e & 1) acc = mulmod(acc, base, mod);
            base = mulmod(base, base, mod);
            e >>= 1;
        }
        return acc;
    }
    std::vector<uint64_t> gcd(std::vector<uint64_t> a, std::vector<uint64_t> b) const {
        trimv(a);
        trimv(b);
        while (!b.empty()) {
            divmod(a, b);
            std::swap(a, b);
        }
        return a;
    }
};

// degree pattern of f mod p via distinct-degree factorization; returns empty
// if f mod p is not squarefree or degenerates
std::vector<int> factor_degree_pattern(const std::vector<Int>& f, uint64_t p) {
    ModPoly R{p};
    std::vector<uint64_t> fp(f.size());
    for (size_t i = 0; i < f.size(); ++i)
        fp[i] = static_cast<uint64_t>(Int(((f[i] % Int(p)) + Int(p)) % Int(p)));
    ModPoly::trimv(fp);
    if (fp.size() != f.size()) return {};
    std::vector<uint64_t> dfp;
    for (size_t i = 1; i < fp.size(); ++i) dfp.push_back(fp[i] * (i % p) % p);
    ModPoly::trimv(dfp);
    if (dfp.empty() || R.gcd(fp, dfp).size() > 1) return {};

    std::vector<int> degrees;
    std::vector<uint64_t> rem = fp;
    std::vector<uint64_t> xp = {0, 1};  // x^(p^k) mod rem
    for (int k = 1; rem.size() > 1; ++k) {
        if (2 * static_cast<size_t>(k) > rem.size() - 1) {
            degrees.push_back(static_cast<int>(rem.size() - 1));
            break;
        }
        xp = R.powmod(xp, p, rem);
        std::vector<uint64_t> diff = xp;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = (diff[1] + p - 1) % p;
        auto gk = R.gcd(diff, rem);
        if (gk.size() > 1) {
            for (size_t c = 0; c < (gk.size() - 1) / k; ++c) degrees.push_back(k);
            std::vector<uint64_t> quot;
            R.divmod(rem, gk, &quot);
            rem = std::move(quot);
            ModPoly::trimv(rem);
            if (rem.size() <= 1) break;
            R.divmod(xp, rem);  // x^(p^k) mod new rem
        }
    }
    int total = 0;
    for (int dgr : degrees) total += dgr;
    if (total != static_cast<int>(f.size() - 1)) return {};
    return degrees;
}

std::vector<Int> divisors_of(const Int& n_in, const Int& limit_trial) {
    Int n = abs(n_in);
    std::vector<std::pair<Int, int>> fact;
    Int d = 2;
    while (d * d <= n && d <= limit_trial) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) {
                n /= d;
                ++e;
            }
            fact.emplace_back(d, e);
        }
        d += (d == 2) ? 1 : 2;
    }
    if (n > 1) fact.emplace_back(n, 1);
    std::vector<Int> divs = {Int(1)};
    for (auto& [pr, e] : fact) {
        size_t old = divs.size();
        Int pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= pr;
            for (size_t j = 0; j < old; ++j) divs.push_back(divs[j] * pk);
        }
    }
    return divs;
}

bool has_integer_root(const std::vector<Int>& f) {
    if (f[0] == 0) return true;
    for (const Int& dv : divisors_of(f[0], Int(1000000))) {
        for (int s : {1, -1}) {
            Rat v = eval_poly(f, Rat(Int(s) * dv));
            if (v == 0) return true;
        }
    }
    return false;
}

// quadratic factor search for quartics: f = (x^2+ax+b)(x^2+cx+e)
bool quartic_has_quadratic_factor(const std::vector<Int>& f) {
    const Int &a0 = f[0], &a1 = f[1], &a2 = f[2], &a3 = f[3];
    for (const Int& bd : divisors_of(a0, Int(1000000))) {
        for (int s : {1, -1}) {
            Int b = Int(s) * bd;
            if (b == 0 || a0 % b != 0) continue;
            Int e = a0 / b;
            // a + c = a3, ac = a2 - b - e, ae + bc = a1
            Int sum = a3, prod = a2 - b - e;
            Int disc = sum * sum - 4 * prod;
            if (disc < 0) continue;
            Int sq = isqrt_floor(disc);
            if (sq * sq != disc) continue;
            for (int t : {1, -1}) {
                Int two_a = sum + Int(t) * sq;
                if (two_a % 2 != 0) continue;
                Int a = two_a / 2, c = sum - a;
                if (a * e + b * c == a1) return true;
            }
        }
    }
    return false;
}

void verify_irreducible(const std::vector<Int>& f) {
    const int d = static_cast<int>(f.size()) - 1;
    if (d == 1) return;
    if (has_integer_root(f)) throw Reducible("polynomial has a rational root");
    if (d <= 3) return;
    if (d == 4) {
        if (quartic_has_quadratic_factor(f)) throw Reducible("polynomial has a quadratic factor");
        return;
    }
    // Degree-pattern sieve over small primes.
    std::bitset<64> possible;  // achievable proper factor degrees
    for (int i = 1; i < d; ++i) possible.set(i);
    static const uint64_t primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                      41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
                                      97, 101, 103, 107, 109, 113, 127, 131, 137, 139,
                                      149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199};
    for (uint64_t p : primes) {
        auto pattern = factor_degree_pattern(f, p);
        if (pattern.empty()) continue;
        std::bitset<64> sums;
        sums.set(0);
        for (int dgr : pattern) {
            std::bitset<64> next = sums;
            for (int s = 0; s + dgr <= d; ++s)
                if (sums.test(s)) next.set(s + dgr);
            sums = next;
        }
        possible &= sums;
        possible.reset(0);
        possible.reset(d);
        if (possible.none()) return;  // irreducible certified
    }
    throw IrreducibilityUndecided(
        "irreducibility sieve inconclusive for degree >= 5 polynomial");
}

// ---------------------------------------------------------------------------
// double-precision Aberth seeds

std::vector<std::complex<double>> aberth_roots(const std::vector<Int>& f) {
    const int d = static_cast<int>(f.size()) - 1;
    std::vector<double> c(f.size());
    for (size_t i = 0; i < f.size(); ++i) c[i] = static_cast<double>(f[i]);
    auto eval = [&](std::complex<double> z) {
        std::complex<double> acc = 0;
        for (int i = d; i >= 0; --i) acc = acc * z + c[i];
        return acc;
    };
    auto evald = [&](std::complex<double> z) {
        std::complex<double> acc = 0;
        for (int i = d; i >= 1; --i) acc = acc * z + c[i] * static_cast<double>(i);
        return acc;
    };
    double bound = 0;
    for (int i = 0; i < d; ++i) bound = std::max(bound, std::abs(c[i]));
    bound += 1.0;
    std::vector<std::complex<double>> z(d);
    for (int i = 0; i < d; ++i) {
        double ang = 2 * 3.14159265358979323846 * i / d + 0.4;
        z[i] = std::polar(bound * (0.5 + 0.3 * i / std::max(1, d - 1)), ang);
    }
    for (int iter = 0; iter < 1000; ++iter) {
        double maxstep = 0;
        for (int i = 0; i < d; ++i) {
            std::complex<double> w = eval(z[i]);
            std::complex<double> dw = evald(z[i]);
            if (dw == std::complex<double>(0)) {
                z[i] += 1e-6;
                continue;
            }
            std::complex<double> ratio = w / dw;
            std::complex<double> sum = 0;
            for (int j = 0; j < d; ++j)
                if (j != i) sum += 1.0 / (z[i] - z[j]);
            std::complex<double> corr = ratio / (1.0 - ratio * sum);
            z[i] -= corr;
            maxstep = std::max(maxstep, std::abs(corr));
        }
        if (maxstep < 1e-15) break;
    }
    return z;
}

unsigned rat_bits_inv(const Rat& r) {
    // approx ceil(log2(1/r)) for 0 < r
    if (r >= 1) return 1;
    Int num = rat_num(r), den = rat_den(r);
    size_t bn = mpz_sizeinbase(num.backend().data(), 2);
    size_t bd = mpz_sizeinbase(den.backend().data(), 2);
    return static_cast<unsigned>(bd > bn ? bd - bn + 1 : 1);
}

struct GQ {  // Gaussian rational
    Rat re, im;
    GQ operator-(const GQ& o) const { return {re - o.re, im - o.im}; }
    GQ operator*(const GQ& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    GQ div(const GQ& o) const {
        Rat n = o.re * o.re + o.im * o.im;
        if (n == 0) throw DivisionByZero("Gaussian rational division by zero");
        return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
    }
};

template <typename Coeff>
GQ eval_poly_gq(const std::vector<Coeff>& p, const GQ& x) {
    GQ acc{Rat(0), Rat(0)};
    for (size_t i = p.size(); i-- > 0;) {
        acc = acc * x;
        acc.re += Rat(p[i]);
    }
    return acc;
}

}  // namespace

std::string to_string(BetaClass c) {
    switch (c) {
        case BetaClass::Pisot: return "Pisot";
        case BetaClass::PerronOnly: return "PerronOnly";
        case BetaClass::Neither: return "Neither";
        default: return "Undecided";
    }
}

// ---------------------------------------------------------------------------

struct NumberField::Impl {
    std::vector<Int> min_poly;
    std::vector<Int> dpoly;
    int d = 0;
    size_t dist_idx = 0;

    mutable std::mutex mu;
    mutable std::vector<CBall> conj;
    mutable RatInterval root;

    // Weierstrass-style inclusion radius around exact center z: the disc of
    // radius d*|p(z)| / prod_{j != self} |z - z_j| contains at least one root
    // of p, and exactly one once all such discs are pairwise disjoint.
    Rat certified_radius(const GQ& z, size_t self) const {
        GQ v = eval_poly_gq(min_poly, z);
        Rat num = sqrt_upper(v.re * v.re + v.im * v.im);
        Rat denom = 1;
        for (size_t j = 0; j < conj.size(); ++j) {
            if (j == self) continue;
            Rat dist = sqrt_lower((z.re - conj[j].re) * (z.re - conj[j].re) +
                                  (z.im - conj[j].im) * (z.im - conj[j].im));
            if (dist <= 0) return Rat(-1);
            denom *= dist;
        }
        return Rat(d) * num / denom;
    }

    bool disjoint_from_others(const CBall& b, size_t self) const {
        for (size_t j = 0; j < conj.size(); ++j) {
            if (j == self) continue;
            if (!b.disjoint_from(conj[j])) return false;
        }
        return true;
    }

    // one Newton contraction on conjugate i; assumes lock held
    bool newton_step(size_t i) const {
        CBall& ball = conj[i];
        GQ z{ball.re, ball.im};
        GQ num = eval_poly_gq(min_poly, z);
        GQ den = eval_poly_gq(dpoly, z);
        if (den.re == 0 && den.im == 0) return false;
        GQ znew = z - num.div(den);
        unsigned bits = std::max(96u, 2 * rat_bits_inv(ball.rad > 0 ? ball.rad : Rat(1, 2)) + 48);
        znew.re = dyadic_floor(znew.re, bits);
        znew.im = dyadic_floor(znew.im, bits);
        if (i == dist_idx) znew.im = 0;  // distinguished root is real
        Rat r = certified_radius(znew, i);
        if (r < 0 || r >= ball.rad) return false;
        CBall cand(znew.re, znew.im, r);
        // the new disc must overlap the old one and stay clear of the others,
        // so it keeps tracking the same root
        Rat shift = sqrt_upper((znew.re - ball.re) * (znew.re - ball.re) +
                               (znew.im - ball.im) * (znew.im - ball.im));
        if (shift > ball.rad + r) return false;
        if (!disjoint_from_others(cand, i)) return false;
        ball = cand;
        return true;
    }

    void refine_conjugate_locked(size_t i, const Rat& target) const {
        if (d == 1) return;
        for (int iter = 0; iter < 256 && conj[i].rad > target; ++iter) {
            if (!newton_step(i)) {
                // try shrinking neighbours first: distances may be too loose
                bool progressed = false;
                for (size_t j = 0; j < conj.size(); ++j)
                    if (j != i && newton_step(j)) progressed = true;
                if (!progressed && !newton_step(i))
                    throw RefinementBudgetExceeded("conjugate disc refinement stalled");
            }
        }
        if (conj[i].rad > target)
            throw RefinementBudgetExceeded("conjugate disc refinement budget exceeded");
    }

    void refine_root_locked(const Rat& max_width) const {
        if (d == 1) return;
        while (root.width() > max_width) {
            refine_conjugate_locked(dist_idx, root.width() / 8);
            const CBall& b = conj[dist_idx];
            Rat lo = std::max(root.lo, b.re - b.rad);
            Rat hi = std::min(root.hi, b.re + b.rad);
            if (lo > hi) throw RefinementBudgetExceeded("root interval refinement inconsistent");
            root = RatInterval(lo, hi);
        }
    }

    // Fixed-point power cache: fp_pow[j] approximates beta^j * 2^fp_bits with
    // error at most fp_err[j]. Lets sign/floor decisions run on plain
    // integers, which dominates long-orbit performance.
    static constexpr unsigned fp_bits = 192;
    mutable std::atomic<bool> fp_ready{false};
    mutable std::vector<Int> fp_pow, fp_err;

    void ensure_fixed_point() const {
        if (fp_ready.load(std::memory_order_acquire)) return;
        std::lock_guard<std::mutex> lock(mu);
        if (fp_ready.load(std::memory_order_relaxed)) return;
        std::vector<Int> pw{Int(1) << fp_bits}, er{Int(0)};
        if (d > 1) {
            refine_root_locked(Rat(1, Int(1) << (fp_bits + 8)));
            RatInterval p(1, 1);
            Rat scale(Int(1) << fp_bits);
            for (int j = 1; j < d; ++j) {
                p = p * root;
                Int lo = floor_rat(p.lo * scale);
                Int hi = ceil_rat(p.hi * scale);
                pw.push_back(lo);
                er.push_back(hi - lo);
            }
        }
        fp_pow = std::move(pw);
        fp_err = std::move(er);
        fp_ready.store(true, std::memory_order_release);
    }

    struct FixedValue {
        Int s, err, den;  // value in [s-err, s+err] / den
    };

    FixedValue fixed_value(const std::vector<Rat>& coords) const {
        ensure_fixed_point();
        Int L = 1;
        for (const auto& c : coords) L = lcm(L, rat_den(c));
        Int s = 0, e = 0;
        for (size_t j = 0; j < coords.size(); ++j) {
            if (coords[j].is_zero()) continue;
            Int n = rat_num(coords[j]) * (L / rat_den(coords[j]));
            s += n * fp_pow[j];
            e += abs(n) * fp_err[j];
        }
        return {std::move(s), std::move(e), L << fp_bits};
    }

    // 0 means undecided at this precision; caller falls back to exact logic
    int fixed_sign(const std::vector<Rat>& coords) const {
        FixedValue v = fixed_value(coords);
        if (v.s > v.err) return 1;
        if (v.s < -v.err) return -1;
        return 0;
    }

    bool fixed_floor(const std::vector<Rat>& coords, Int& out) const {
        FixedValue v = fixed_value(coords);
        Int klo, khi;
        Int a = v.s - v.err, b = v.s + v.err;
        mpz_fdiv_q(klo.backend().data(), a.backend().data(), v.den.backend().data());
        mpz_fdiv_q(khi.backend().data(), b.backend().data(), v.den.backend().data());
        if (klo != khi) return false;
        out = std::move(klo);
        return true;
    }
};

NumberField NumberField::make(std::vector<Int> min_poly, RatInterval root_hint) {
    while (!min_poly.empty() && min_poly.back() == 0) min_poly.pop_back();
    if (min_poly.size() < 2) throw NotMonic("polynomial must have degree >= 1");
    if (min_poly.back() != 1) throw NotMonic("polynomial must be monic");
    verify_irreducible(min_poly);

    auto impl = std::make_shared<Impl>();
    impl->min_poly = min_poly;
    impl->dpoly = derivative(min_poly);
    impl->d = static_cast<int>(min_poly.size()) - 1;

    if (impl->d == 1) {
        Rat root = Rat(-min_poly[0]);
        if (!root_hint.contains(root)) throw NoRootInInterval("hint does not contain the root");
        if (root <= 1) throw RootNotGreaterThanOne("root must exceed 1");
        impl->conj = {CBall(root, 0, 0)};
        impl->root = RatInterval(root, root);
        impl->dist_idx = 0;
        return NumberField(std::move(impl));
    }

    // sign change on the hint (exact): required for an isolated real root
    Rat flo = eval_poly(min_poly, root_hint.lo);
    Rat fhi = eval_poly(min_poly, root_hint.hi);
    if (flo == 0 || fhi == 0)
        throw Reducible("polynomial has a rational root at a hint endpoint");
    if ((flo > 0) == (fhi > 0))
        throw NoRootInInterval("no sign change of the polynomial over the hint");

    // seed all roots, then certify Weierstrass inclusion discs
    auto seeds = aberth_roots(min_poly);
    std::vector<GQ> centers(impl->d);
    for (int i = 0; i < impl->d; ++i)
        centers[i] = GQ{rat_from_double(seeds[i].real()), rat_from_double(seeds[i].imag())};
    bool certified = false;
    for (int polish = 0; polish < 32 && !certified; ++polish) {
        impl->conj.assign(impl->d, CBall());
        for (int i = 0; i < impl->d; ++i) impl->conj[i] = CBall(centers[i].re, centers[i].im, 0);
        for (int i = 0; i < impl->d; ++i)
            impl->conj[i].rad = impl->certified_radius(centers[i], i);
        certified = true;
        for (int i = 0; i < impl->d && certified; ++i) {
            if (impl->conj[i].rad < 0) certified = false;
            for (int j = i + 1; j < impl->d && certified; ++j)
                if (!impl->conj[i].disjoint_from(impl->conj[j])) certified = false;
        }
        if (!certified) {
            // exact Newton polish of all centers, then retry certification
            for (int i = 0; i < impl->d; ++i) {
                GQ num = eval_poly_gq(min_poly, centers[i]);
                GQ den = eval_poly_gq(impl->dpoly, centers[i]);
                if (den.re == 0 && den.im == 0) continue;
                GQ z = centers[i] - num.div(den);
                centers[i] = GQ{dyadic_floor(z.re, 128), dyadic_floor(z.im, 128)};
            }
        }
    }
    if (!certified)
        throw RefinementBudgetExceeded("could not certify conjugate discs from seeds");

    // identify the distinguished ball: pick the real-axis ball meeting the hint
    impl->dist_idx = static_cast<size_t>(-1);
    Rat target(1, Int(1) << 66);
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::vector<size_t> hits;
        for (size_t i = 0; i < impl->conj.size(); ++i) {
            const CBall& b = impl->conj[i];
            if (abs_rat(b.im) > b.rad) continue;
            if (b.re + b.rad < root_hint.lo || b.re - b.rad > root_hint.hi) continue;
            hits.push_back(i);
        }
        if (hits.size() == 1) {
            impl->dist_idx = hits[0];
            break;
        }
        if (hits.empty()) throw NoRootInInterval("no conjugate disc meets the hint");
        for (size_t i : hits) impl->refine_conjugate_locked(i, impl->conj[i].rad / 16);
    }
    if (impl->dist_idx == static_cast<size_t>(-1))
        throw NoRootInInterval("hint does not isolate a single real root");

    // re-center the distinguished ball on the real axis
    {
        CBall& b = impl->conj[impl->dist_idx];
        GQ z{b.re, Rat(0)};
        Rat r = impl->certified_radius(z, impl->dist_idx);
        if (r >= 0 && r <= b.rad + abs_rat(b.im)) b = CBall(z.re, 0, r);
    }
    impl->refine_conjugate_locked(impl->dist_idx, target);
    for (size_t i = 0; i < impl->conj.size(); ++i) impl->refine_conjugate_locked(i, target);

    {
        const CBall& b = impl->conj[impl->dist_idx];
        Rat lo = std::max(root_hint.lo, b.re - b.rad);
        Rat hi = std::min(root_hint.hi, b.re + b.rad);
        if (lo > hi) throw NoRootInInterval("certified root disc escaped the hint");
        impl->root = RatInterval(lo, hi);
    }
    // enforce beta > 1
    for (int iter = 0; impl->root.lo <= 1; ++iter) {
        if (impl->root.hi <= 1) throw RootNotGreaterThanOne("distinguished root is <= 1");
        if (iter > 256) throw RefinementBudgetExceeded("could not separate root from 1");
        impl->refine_root_locked(impl->root.width() / 2);
    }
    return NumberField(std::move(impl));
}

int NumberField::degree() const { return impl_->d; }
const std::vector<Int>& NumberField::min_poly() const { return impl_->min_poly; }
size_t NumberField::distinguished_index() const { return impl_->dist_idx; }

RatInterval NumberField::root_enclosure(const Rat& max_width) const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    impl_->refine_root_locked(max_width);
    return impl_->root;
}

CBall NumberField::conjugate(size_t i, const Rat& max_radius) const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    impl_->refine_conjugate_locked(i, max_radius);
    return impl_->conj[i];
}

std::vector<size_t> NumberField::other_conjugates() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < static_cast<size_t>(impl_->d); ++i)
        if (i != impl_->dist_idx) out.push_back(i);
    return out;
}

bool NumberField::same_as(const NumberField& o) const {
    return impl_ == o.impl_ || impl_->min_poly == o.impl_->min_poly;
}

// ---------------------------------------------------------------------------

BetaClass classify(const NumberField& field, unsigned refine_budget) {
    if (field.degree() == 1) return BetaClass::Pisot;
    // p(-x) == (-1)^d p(x) puts -beta among the conjugates: modulus equals beta
    {
        const auto& p = field.min_poly();
        bool symmetric = true;
        int d = static_cast<int>(p.size()) - 1;
        for (int k = 0; k <= d; ++k)
            if (((d - k) % 2 == 1) && p[k] != 0) symmetric = false;
        if (symmetric) return BetaClass::Neither;
    }
    Rat target(1, 256);
    auto others = field.other_conjugates();
    for (unsigned round = 0; round < refine_budget; ++round, target /= 2) {
        RatInterval beta_iv = field.root_enclosure(target);
        bool all_inside_unit = true, all_below_beta = true, some_outside_unit = false,
             any_unknown = false;
        for (size_t i : others) {
            CBall b = field.conjugate(i, target);
            Rat up = b.abs_upper(), lo = b.abs_lower();
            if (lo > beta_iv.hi) return BetaClass::Neither;
            if (!(up < 1)) all_inside_unit = false;
            if (lo > 1) some_outside_unit = true;
            if (!(up < beta_iv.lo)) all_below_beta = false;
            if (!(up < 1) && !(lo > 1)) any_unknown = true;
        }
        if (all_inside_unit) return BetaClass::Pisot;
        if (all_below_beta && some_outside_unit && !any_unknown) return BetaClass::PerronOnly;
    }
    return BetaClass::Undecided;
}

// ---------------------------------------------------------------------------

FieldElement::FieldElement(NumberField field, std::vector<Rat> coords)
    : field_(std::move(field)), coords_(std::move(coords)) {
    coords_.resize(field_.degree(), Rat(0));
}

FieldElement FieldElement::rational(const NumberField& field, Rat value) {
    std::vector<Rat> c(field.degree(), Rat(0));
    c[0] = std::move(value);
    return FieldElement(field, std::move(c));
}

FieldElement FieldElement::beta(const NumberField& field) {
    if (field.degree() == 1) return rational(field, Rat(-field.min_poly()[0]));
    std::vector<Rat> c(field.degree(), Rat(0));
    c[1] = 1;
    return FieldElement(field, std::move(c));
}

void FieldElement::check_same_field(const FieldElement& o) const {
    if (!field_.same_as(o.field_)) throw FieldMismatch("operands from different fields");
}

bool FieldElement::is_zero() const {
    for (const auto& c : coords_)
        if (c != 0) return false;
    return true;
}

bool FieldElement::is_rational() const {
    for (size_t i = 1; i < coords_.size(); ++i)
        if (coords_[i] != 0) return false;
    return true;
}

Rat FieldElement::as_rational() const {
    if (!is_rational()) throw FieldError("element is not rational");
    return coords_.empty() ? Rat(0) : coords_[0];
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same_field(o);
    std::vector<Rat> c(coords_);
    for (size_t i = 0; i < c.size(); ++i) c[i] += o.coords_[i];
    return FieldElement(field_, std::move(c));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_same_field(o);
    std::vector<Rat> c(coords_);
    for (size_t i = 0; i < c.size(); ++i) c[i] -= o.coords_[i];
    return FieldElement(field_, std::move(c));
}

FieldElement FieldElement::operator-() const {
    std::vector<Rat> c(coords_);
    for (auto& x : c) x = -x;
    return FieldElement(field_, std::move(c));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same_field(o);
    return FieldElement(field_, poly_mod(poly_mul(coords_, o.coords_), field_.min_poly()));
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
    check_same_field(o);
    if (o.is_zero()) throw DivisionByZero("division by zero field element");
    if (o.is_rational()) return *this * Rat(1 / o.coords_[0]);
    auto inv = poly_inverse(o.coords_, field_.min_poly());
    return FieldElement(field_, poly_mod(poly_mul(coords_, inv), field_.min_poly()));
}

FieldElement FieldElement::operator*(const Rat& c) const {
    std::vector<Rat> out(coords_);
    for (auto& x : out) x *= c;
    return FieldElement(field_, std::move(out));
}

FieldElement FieldElement::operator+(const Rat& c) const {
    std::vector<Rat> out(coords_);
    out[0] += c;
    return FieldElement(field_, std::move(out));
}

FieldElement FieldElement::operator-(const Rat& c) const { return *this + Rat(-c); }

bool FieldElement::operator==(const FieldElement& o) const {
    return field_.same_as(o.field_) && coords_ == o.coords_;
}

Int FieldElement::coordinate_denominator() const {
    Int l = 1;
    for (const auto& c : coords_) l = lcm(l, rat_den(c));
    return l;
}

RatInterval FieldElement::enclosure(const Rat& max_width) const {
    if (is_rational()) {
        Rat v = coords_.empty() ? Rat(0) : coords_[0];
        return RatInterval(v, v);
    }
    Rat w = max_width < Rat(1, 16) ? Rat(max_width) : Rat(1, 16);
    for (int iter = 0; iter < 512; ++iter, w /= 4) {
        RatInterval iv = eval_poly(coords_, field_.root_enclosure(w));
        if (iv.width() <= max_width) return iv;
    }
    throw RefinementBudgetExceeded("enclosure refinement budget exceeded");
}

CBall FieldElement::embedding(size_t i, const Rat& max_radius) const {
    if (i == field_.distinguished_index()) {
        return CBall::from_interval(enclosure(max_radius));
    }
    Rat r = max_radius < Rat(1, 16) ? Rat(max_radius) : Rat(1, 16);
    for (int iter = 0; iter < 512; ++iter, r /= 4) {
        CBall out = eval_poly(coords_, field_.conjugate(i, r));
        if (out.rad <= max_radius) return out;
    }
    throw RefinementBudgetExceeded("embedding refinement budget exceeded");
}

int FieldElement::sign() const {
    if (is_zero()) return 0;
    if (is_rational()) return coords_[0] > 0 ? 1 : -1;
    if (int fs = field_.impl_->fixed_sign(coords_)) return fs;
    // |x| >= 1 / (L * prod_i |phi_i(L x)|) for the nonzero algebraic integer Lx
    Int L = coordinate_denominator();
    FieldElement lx = *this * Rat(L);
    Rat prod = 1;
    for (size_t i : field_.other_conjugates()) prod *= lx.embedding(i, Rat(1, 16)).abs_upper();
    if (prod < 1) prod = 1;  // |phi_1(Lx)| >= 1/prod, and smaller prod only helps
    Rat bound = Rat(1) / (Rat(L) * prod);
    Rat w(1, 4);
    for (int iter = 0; iter < 4096; ++iter, w /= 2) {
        RatInterval iv = enclosure(w);
        if (iv.lo > 0) return 1;
        if (iv.hi < 0) return -1;
        if (iv.width() < bound)
            throw RefinementBudgetExceeded("sign refinement contradicts norm bound");
    }
    throw RefinementBudgetExceeded("sign refinement budget exceeded");
}

Int FieldElement::floor() const {
    if (is_rational()) return floor_rat(as_rational());
    if (Int k; field_.impl_->fixed_floor(coords_, k)) return k;
    Rat w(1, 4);
    for (int iter = 0; iter < 4096; ++iter, w /= 2) {
        RatInterval iv = enclosure(w);
        Int k = floor_rat(iv.lo);
        if (iv.hi < Rat(k + 1)) return k;
    }
    throw RefinementBudgetExceeded("floor refinement budget exceeded");
}

FieldElement FieldElement::frac() const { return *this - Rat(floor()); }

std::string FieldElement::key() const {
    std::string out;
    for (const auto& c : coords_) {
        out += rat_to_string(c);
        out += ',';
    }
    return out;
}

std::string FieldElement::to_string() const {
    std::string out = "(";
    for (size_t i = 0; i < coords_.size(); ++i) {
        if (i) out += ", ";
        out += rat_to_string(coords_[i]);
    }
    return out + ")";
}

std::string FieldElement::to_decimal(unsigned digits) const {
    Int scale = 1;
    for (unsigned i = 0; i < digits + 2; ++i) scale *= 10;
    RatInterval iv = enclosure(Rat(1, scale));
    return rat_to_decimal(iv.mid(), digits);
}

double FieldElement::to_double() const {
    if (is_rational()) {
        Rat v = coords_.empty() ? Rat(0) : coords_[0];
        return mpq_get_d(v.backend().data());
    }
    // s/den approximates the value to within err/den <~ 2^-180
    auto v = field_.impl_->fixed_value(coords_);
    long es = 0, ed = 0;
    double ms = mpz_get_d_2exp(&es, v.s.backend().data());
    double md = mpz_get_d_2exp(&ed, v.den.backend().data());
    return ms / md * std::ldexp(1.0, static_cast<int>(es - ed));
}

std::vector<Rat> conjugate_bound(const NumberField& field,
                                 const std::vector<FieldElement>& E) {
    if (E.empty()) throw FieldError("conjugate_bound: empty set");
    std::vector<Rat> out;
    for (size_t i : field.other_conjugates()) {
        Rat mx = 0;
        for (const auto& e : E) {
            Rat u = e.embedding(i, Rat(1, Int(1) << 40)).abs_upper();
            if (u > mx) mx = u;
        }
        out.push_back(mx);
    }
    return out;
}

std::vector<Rat> coordinate_bounds(const NumberField& field,
                                   const std::vector<Rat>& embedding_bounds) {
    size_t d = static_cast<size_t>(field.degree());
    if (embedding_bounds.size() != d)
        throw FieldError("coordinate_bounds: one bound per conjugate required");
    if (d == 1) return {embedding_bounds[0]};

    // Coordinates c solve V c = phi with V_{kj} = z_k^j, so |c_j| is bounded
    // by sum_k |V^{-1}_{jk}| * embedding_bounds[k]. Invert V in ball
    // arithmetic; retry with tighter conjugate discs if a pivot straddles 0.
    for (int attempt = 0; attempt < 6; ++attempt) {
        Rat prec(1, Int(1) << (40 + 30 * attempt));
        unsigned keep = 160 + 60 * attempt;
        std::vector<std::vector<CBall>> M(d, std::vector<CBall>(2 * d));
        for (size_t k = 0; k < d; ++k) {
            CBall z = field.conjugate(k, prec);
            M[k][0] = CBall::from_real(1);
            for (size_t j = 1; j < d; ++j) M[k][j] = (M[k][j - 1] * z).compressed(keep);
            for (size_t j = 0; j < d; ++j)
                M[k][d + j] = CBall::from_real(k == j ? 1 : 0);
        }
        bool ok = true;
        for (size_t col = 0; col < d && ok; ++col) {
            size_t piv = col;
            for (size_t r = col + 1; r < d; ++r)
                if (M[r][col].abs_lower() > M[piv][col].abs_lower()) piv = r;
            if (M[piv][col].center_abs_lower() <= M[piv][col].rad) {
                ok = false;
                break;
            }
            std::swap(M[col], M[piv]);
            CBall inv = M[col][col].inverse();
            for (size_t j = col; j < 2 * d; ++j) M[col][j] = (M[col][j] * inv).compressed(keep);
            for (size_t r = 0; r < d; ++r) {
                if (r == col) continue;
                CBall f = M[r][col];
                for (size_t j = col; j < 2 * d; ++j)
                    M[r][j] = (M[r][j] - f * M[col][j]).compressed(keep);
                M[r][col] = CBall::from_real(0);
            }
        }
        if (!ok) continue;
        std::vector<Rat> out(d);
        for (size_t j = 0; j < d; ++j) {
            Rat s = 0;
            for (size_t k = 0; k < d; ++k)
                s += M[j][d + k].abs_upper() * embedding_bounds[k];
            out[j] = s;
        }
        return out;
    }
    throw RefinementBudgetExceeded("coordinate_bounds: embedding matrix inversion failed");
}

}  // namespace pisotdyn
