#include "pisotdyn/maps.hpp"

#include <algorithm>
#include <set>

namespace pisotdyn {

namespace {

FieldElement beta_pow(const NumberField& field, unsigned m) {
    FieldElement p = FieldElement::rational(field, 1);
    FieldElement b = FieldElement::beta(field);
    for (unsigned i = 0; i < m; ++i) p *= b;
    return p;
}

}  // namespace

bool Branch::contains(const FieldElement& x) const {
    int sl = (x - left).sign();
    if (sl < 0 || (sl == 0 && !left_closed)) return false;
    int sr = (x - right).sign();
    if (sr > 0 || (sr == 0 && !right_closed)) return false;
    return true;
}

PLMap PLMap::build(NumberField field, std::vector<Branch> branches, std::string label) {
    if (branches.empty()) throw PartitionGap(label + ": no branches");
    FieldElement zero = FieldElement::rational(field, 0);
    FieldElement one = FieldElement::rational(field, 1);

    for (Branch& br : branches) {
        if (!br.left.field().same_as(field) || !br.right.field().same_as(field) ||
            !br.b.field().same_as(field))
            throw FieldMismatch(label + ": branch endpoints from a different field");
        if (br.epsilon != 1 && br.epsilon != -1)
            throw MapError(label + ": branch slope sign must be +-1");
        if (br.m == 0) throw MapError(label + ": branch slope exponent must be >= 1");
        int cmp = (br.left - br.right).sign();
        if (cmp > 0) throw MapError(label + ": branch with left > right");
        if (cmp == 0 && !(br.left_closed && br.right_closed))
            throw MapError(label + ": degenerate branch must be a closed singleton");
        br.slope = beta_pow(field, br.m) * Rat(br.epsilon);
    }

    std::sort(branches.begin(), branches.end(), [](const Branch& a, const Branch& b) {
        int c = (a.left - b.left).sign();
        if (c != 0) return c < 0;
        // closed-left branches (in particular singletons) sort first
        return a.left_closed && !b.left_closed;
    });

    // Sweep: cur is the infimum of the uncovered region; need_point says
    // whether the point cur itself is still uncovered.
    FieldElement cur = zero;
    bool need_point = true;
    for (const Branch& br : branches) {
        int c = (br.left - cur).sign();
        if (c < 0) throw PartitionOverlap(label + ": branches overlap at " + br.left.to_string());
        if (c > 0)
            throw PartitionGap(label + ": uncovered gap starting at " + cur.to_string());
        if (need_point && !br.left_closed)
            throw PartitionGap(label + ": point " + cur.to_string() + " uncovered");
        if (!need_point && br.left_closed)
            throw PartitionOverlap(label + ": point " + cur.to_string() + " covered twice");
        cur = br.right;
        need_point = !br.right_closed;
    }
    if (need_point || cur != one) {
        if ((cur - one).sign() > 0)
            throw ImageEscapes(label + ": branch extends past 1");
        throw PartitionGap(label + ": uncovered gap starting at " + cur.to_string());
    }

    for (const Branch& br : branches) {
        FieldElement yl = br.image(br.left), yr = br.image(br.right);
        if (br.epsilon < 0) std::swap(yl, yr);
        // yl = inf of image closure, yr = sup; escape iff outside [0,1]
        if (yl.sign() < 0 || (yr - one).sign() > 0)
            throw ImageEscapes(label + ": branch image leaves [0,1]");
    }

    PLMap m;
    m.field_ = std::move(field);
    m.branches_ = std::move(branches);
    m.label_ = std::move(label);
    return m;
}

unsigned PLMap::max_m() const {
    unsigned mm = 0;
    for (const Branch& br : branches_) mm = std::max(mm, br.m);
    return mm;
}

size_t PLMap::branch_index(const FieldElement& x) const {
    if (!x.field().same_as(field_)) throw FieldMismatch(label_ + ": point from a different field");
    for (size_t i = 0; i < branches_.size(); ++i)
        if (branches_[i].contains(x)) return i;
    // the branches tile [0,1], so an unowned point lies outside the domain
    throw OutOfDomain(label_ + ": point outside [0,1]");
}

std::pair<FieldElement, size_t> PLMap::apply(const FieldElement& x) const {
    size_t i = branch_index(x);
    return {branches_[i].image(x), i};
}

PLMap::SidedResult PLMap::apply_one_sided(const FieldElement& x, Side side) const {
    if (!x.field().same_as(field_)) throw FieldMismatch(label_ + ": point from a different field");
    if (x.sign() < 0 || (x - FieldElement::rational(field_, 1)).sign() > 0)
        throw OutOfDomain(label_ + ": point outside [0,1]");
    for (size_t i = 0; i < branches_.size(); ++i) {
        const Branch& br = branches_[i];
        if (br.is_singleton()) continue;  // singletons own no sided neighborhood
        int sl = (x - br.left).sign(), sr = (x - br.right).sign();
        bool owns = side == Side::Right ? (sl >= 0 && sr < 0) : (sl > 0 && sr <= 0);
        if (!owns) continue;
        Side out = br.epsilon > 0 ? side : (side == Side::Right ? Side::Left : Side::Right);
        return {br.image(x), out, i};
    }
    throw NoSidedNeighborhood(label_ + ": no " +
                              std::string(side == Side::Right ? "right" : "left") +
                              " neighborhood of " + x.to_string() + " inside [0,1]");
}

std::vector<std::pair<FieldElement, size_t>> PLMap::preimages(const FieldElement& x) const {
    if (!x.field().same_as(field_)) throw FieldMismatch(label_ + ": point from a different field");
    std::vector<std::pair<FieldElement, size_t>> out;
    for (size_t i = 0; i < branches_.size(); ++i) {
        const Branch& br = branches_[i];
        if (br.is_singleton()) {
            if (br.image(br.left) == x) out.emplace_back(br.left, i);
            continue;
        }
        FieldElement y = (x - br.b) / br.slope;
        if (br.contains(y)) out.emplace_back(std::move(y), i);
    }
    return out;
}

std::vector<FieldElement> PLMap::intercepts() const {
    std::vector<FieldElement> out;
    out.reserve(branches_.size());
    for (const Branch& br : branches_) out.push_back(br.b);
    return out;
}

FieldElement AffineForm::eval(const FieldElement& x0) const {
    return beta_pow(x0.field(), theta) * x0 * Rat(sign) + intercept;
}

void AffineForm::extend(const Branch& br) {
    intercept = br.slope * intercept + br.b;
    sign *= br.epsilon;
    theta += br.m;
}

AffineForm affine_form(const PLMap& map, const FieldElement& x0, unsigned n) {
    AffineForm f;
    f.intercept = FieldElement::rational(map.field(), 0);
    FieldElement x = x0;
    for (unsigned i = 0; i < n; ++i) {
        auto [y, bi] = map.apply(x);
        f.extend(map.branches()[bi]);
        x = std::move(y);
    }
    return f;
}

// --- constructors ----------------------------------------------------------

PLMap beta_map(const NumberField& field) {
    FieldElement b = FieldElement::beta(field);
    Int fl = b.floor();
    if (fl < 1) throw BetaOutOfRange("beta_map: beta must exceed 1");
    bool integral = field.is_trivial();
    std::vector<Branch> brs;
    for (Int k = 0; k < fl; ++k) {
        Branch br;
        br.left = FieldElement::rational(field, Rat(k)) / b;
        br.right = FieldElement::rational(field, Rat(k + 1)) / b;
        br.epsilon = 1;
        br.m = 1;
        br.b = FieldElement::rational(field, Rat(-k));
        if (integral && k == fl - 1) br.right_closed = false;  // stays half-open
        brs.push_back(std::move(br));
    }
    Branch last;
    last.left = integral ? FieldElement::rational(field, 1)
                         : FieldElement::rational(field, Rat(fl)) / b;
    last.right = FieldElement::rational(field, 1);
    last.right_closed = true;
    last.epsilon = 1;
    last.m = 1;
    last.b = FieldElement::rational(field, Rat(-fl));
    brs.push_back(std::move(last));
    return PLMap::build(field, std::move(brs), "beta");
}

PLMap flip_radix_map(int r, const std::vector<int>& s) {
    if (r < 2) throw BetaOutOfRange("flip_radix_map: radix must be >= 2");
    if (s.size() != static_cast<size_t>(r))
        throw LengthMismatch("flip_radix_map: flip vector length must equal the radix");
    NumberField field =
        NumberField::make({Int(-r), Int(1)}, RatInterval(Rat(r) - Rat(1, 2), Rat(r) + Rat(1, 2)));
    std::vector<Branch> brs;
    for (int i = 0; i < r; ++i) {
        if (s[i] != 0 && s[i] != 1)
            throw MapError("flip_radix_map: flip entries must be 0 or 1");
        Branch br;
        br.left = FieldElement::rational(field, Rat(i, r));
        br.right = FieldElement::rational(field, Rat(i + 1, r));
        br.m = 1;
        if (s[i] == 0) {
            br.epsilon = 1;
            br.b = FieldElement::rational(field, Rat(-i));
        } else {
            br.epsilon = -1;
            br.b = FieldElement::rational(field, Rat(i + 1));
        }
        brs.push_back(std::move(br));
    }
    Branch one;
    one.left = one.right = FieldElement::rational(field, 1);
    one.right_closed = true;
    one.epsilon = 1;
    one.m = 1;
    one.b = FieldElement::rational(field, Rat(-r));
    brs.push_back(std::move(one));
    return PLMap::build(field, std::move(brs), "flip_radix");
}

std::pair<PLMap, PLMap> kn_pair(int which) {
    if (which == 1) {
        NumberField f2 =
            NumberField::make({Int(-2), Int(1)}, RatInterval(Rat(3, 2), Rat(5, 2)));
        PLMap t1 = beta_map(f2);
        std::vector<Branch> brs(4);
        auto q = [&](int n, int d) { return FieldElement::rational(f2, Rat(n, d)); };
        brs[0] = {q(0, 1), q(1, 2), true, false, 1, 1, q(0, 1), {}};
        brs[1] = {q(1, 2), q(3, 4), true, false, 1, 2, q(-2, 1), {}};
        brs[2] = {q(3, 4), q(1, 1), true, false, 1, 2, q(-3, 1), {}};
        brs[3] = {q(1, 1), q(1, 1), true, true, 1, 2, q(-4, 1), {}};
        return {std::move(t1), PLMap::build(f2, std::move(brs), "s1")};
    }
    if (which == 2) {
        NumberField fg =
            NumberField::make({Int(-1), Int(-1), Int(1)}, RatInterval(Rat(3, 2), Rat(2)));
        PLMap t2 = beta_map(fg);
        FieldElement b = FieldElement::beta(fg);
        FieldElement zero = FieldElement::rational(fg, 0);
        FieldElement one = FieldElement::rational(fg, 1);
        std::vector<Branch> brs(2);
        brs[0] = {zero, one / b, true, false, 1, 1, zero, {}};
        brs[1] = {one / b, one, true, true, 1, 2, -b, {}};
        return {std::move(t2), PLMap::build(fg, std::move(brs), "s2")};
    }
    throw std::invalid_argument("kn_pair: which must be 1 or 2");
}

std::vector<std::vector<Int>> handelman_search(const NumberField& field, unsigned max_l,
                                               const Int& max_coeff) {
    if (max_l == 0 || max_coeff < 1) return {};
    FieldElement b = FieldElement::beta(field);
    FieldElement inv_b = FieldElement::rational(field, 1) / b;
    // neg_pow[i] = beta^{-i}, suffix[i] = max_coeff * sum_{j>i} beta^{-j}
    std::vector<FieldElement> neg_pow(max_l + 1), suffix(max_l + 1);
    neg_pow[0] = FieldElement::rational(field, 1);
    for (unsigned i = 1; i <= max_l; ++i) neg_pow[i] = neg_pow[i - 1] * inv_b;
    suffix[max_l] = FieldElement::rational(field, 0);
    for (unsigned i = max_l; i-- > 0;)
        suffix[i] = suffix[i + 1] + neg_pow[i + 1] * Rat(max_coeff);

    std::vector<std::vector<Int>> found;
    std::vector<Int> digits;
    auto dfs = [&](auto&& self, const FieldElement& rem, unsigned i) -> void {
        if (rem.is_zero()) {
            std::vector<Int> v = digits;
            while (!v.empty() && v.back() == 0) v.pop_back();
            if (!v.empty()) found.push_back(std::move(v));
            return;
        }
        if (i > max_l) return;
        // a_i <= floor(rem * beta^i); iterate downward, stop once the
        // remainder exceeds what the remaining levels can absorb.
        Int hi = (rem / neg_pow[i]).floor();
        if (hi > max_coeff) hi = max_coeff;
        for (Int a = hi; a >= 0; --a) {
            FieldElement next = rem - neg_pow[i] * Rat(a);
            if ((next - suffix[i]).sign() > 0) break;
            digits.push_back(a);
            self(self, next, i + 1);
            digits.pop_back();
        }
    };
    dfs(dfs, FieldElement::rational(field, 1), 1);
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return found;
}

PLMap handelman_map(const NumberField& field, const std::vector<Int>& vec,
                    const std::vector<unsigned>& arrangement, const std::vector<int>& signs) {
    if (vec.empty() || vec.back() == 0)
        throw BadIdentity("handelman_map: coefficient vector must end in a nonzero entry");
    FieldElement b = FieldElement::beta(field);
    FieldElement inv_b = FieldElement::rational(field, 1) / b;
    FieldElement sum = FieldElement::rational(field, 0);
    FieldElement pw = FieldElement::rational(field, 1);
    Int total = 0;
    for (const Int& a : vec) {
        if (a < 0) throw BadIdentity("handelman_map: negative coefficient");
        pw *= inv_b;
        sum += pw * Rat(a);
        total += a;
    }
    if (sum != FieldElement::rational(field, 1))
        throw BadIdentity("handelman_map: coefficients do not satisfy 1 = sum a_i beta^-i");
    if (arrangement.size() != static_cast<size_t>(total))
        throw BadArrangement("handelman_map: arrangement length must equal sum of coefficients");
    if (signs.size() != arrangement.size())
        throw LengthMismatch("handelman_map: one sign per arrangement entry required");
    std::vector<Int> counts(vec.size(), Int(0));
    for (unsigned e : arrangement) {
        if (e < 1 || e > vec.size())
            throw BadArrangement("handelman_map: arrangement exponent out of range");
        counts[e - 1] += 1;
    }
    if (counts != vec)
        throw BadArrangement("handelman_map: arrangement is not a permutation of the identity");

    std::vector<Branch> brs;
    FieldElement cur = FieldElement::rational(field, 0);
    FieldElement one = FieldElement::rational(field, 1);
    for (size_t k = 0; k < arrangement.size(); ++k) {
        if (signs[k] != 1 && signs[k] != -1)
            throw MapError("handelman_map: signs must be +-1");
        unsigned e = arrangement[k];
        FieldElement len = FieldElement::rational(field, 1);
        for (unsigned j = 0; j < e; ++j) len *= inv_b;
        Branch br;
        br.left = cur;
        cur = cur + len;
        br.right = cur;
        br.m = e;
        br.epsilon = signs[k];
        FieldElement pe = beta_pow(field, e);
        br.b = signs[k] > 0 ? -(pe * br.left) : one + pe * br.left;
        if (k + 1 == arrangement.size()) {
            br.right = one;  // exact by the identity; avoids accumulated form
            br.right_closed = true;
        }
        brs.push_back(std::move(br));
    }
    return PLMap::build(field, std::move(brs), "handelman");
}

PLMap st_map(const NumberField& field, const FieldElement& t) {
    FieldElement b = FieldElement::beta(field);
    Int fl = b.floor();
    if (fl < 1) throw BetaOutOfRange("st_map: beta must exceed 1");
    bool integral = field.is_trivial();
    Int cl = integral ? fl : fl + 1;
    FieldElement tmax = FieldElement::rational(field, Rat(cl)) / b - Rat(1);
    if (t.sign() < 0 || (t - tmax).sign() > 0)
        throw TOutOfRange("st_map: t outside [0, ceil(beta)/beta - 1]");
    if (integral) return beta_map(field);  // t = 0 forced; 1 -> 0 convention

    FieldElement p = FieldElement::rational(field, Rat(fl)) / b - t;
    std::vector<Branch> brs;
    for (Int k = 0; k < fl; ++k) {
        Branch br;
        br.left = FieldElement::rational(field, Rat(k)) / b;
        FieldElement r = FieldElement::rational(field, Rat(k + 1)) / b;
        br.right = (r - p).sign() > 0 ? p : r;
        if (br.left == br.right) continue;  // t = max truncates the last piece away
        br.epsilon = 1;
        br.m = 1;
        br.b = FieldElement::rational(field, Rat(-k));
        brs.push_back(std::move(br));
    }
    Branch last;
    last.left = p;
    last.right = FieldElement::rational(field, 1);
    last.right_closed = true;
    last.epsilon = 1;
    last.m = 1;
    last.b = FieldElement::rational(field, 1) - b;
    brs.push_back(std::move(last));
    return PLMap::build(field, std::move(brs), "st");
}

PLMap flipped_beta_counterexample(const NumberField& field) {
    FieldElement b = FieldElement::beta(field);
    FieldElement one = FieldElement::rational(field, 1);
    if ((b * b - Rat(2)).sign() >= 0)
        throw BetaOutOfRange("flipped_beta_counterexample: requires 1 < beta < sqrt(2)");
    std::vector<Branch> brs(2);
    brs[0] = {FieldElement::rational(field, 0), one / b, true, false, -1, 1, one, {}};
    brs[1] = {one / b, one, true, true, 1, 1, -one, {}};
    return PLMap::build(field, std::move(brs), "flipped_beta");
}

FieldElement digit_alpha(const PLMap& map, const FieldElement& x) {
    if (x.sign() < 0 || (x - FieldElement::rational(map.field(), 1)).sign() >= 0)
        throw OutOfDomain("digit_alpha: point must lie in [0,1)");
    FieldElement y = map.apply(x).first;
    return FieldElement::beta(map.field()) * x - y;
}

std::vector<FieldElement> digit_set(const NumberField& field) {
    FieldElement b = FieldElement::beta(field);
    Int fl = b.floor();
    std::vector<FieldElement> out;
    for (Int k = 0; k < fl; ++k) out.push_back(FieldElement::rational(field, Rat(k)));
    FieldElement top = b - Rat(1);
    bool dup = false;
    for (const FieldElement& e : out) dup = dup || e == top;
    if (!dup) out.push_back(std::move(top));
    return out;
}

}  // namespace pisotdyn
