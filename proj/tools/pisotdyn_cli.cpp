#include "pisotdyn/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

using namespace pisotdyn;

namespace {

struct CommonOpts {
    std::string poly, root, map_spec = "beta", x0 = "1/2", out;
};

NumberField make_field(const CommonOpts& o) {
    if (o.poly.empty()) throw ParseError("missing --poly");
    std::string spec = "poly=" + o.poly;
    if (!o.root.empty()) spec += ";root=" + o.root;
    return parse_field(spec);
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        write_file(out_path, content);
}

unsigned precision_floor() {
    const char* env = std::getenv("PISOTDYN_MIN_BITS");
    if (!env) return 64;
    long v = std::strtol(env, nullptr, 10);
    return v > 0 ? static_cast<unsigned>(v) : 64;
}

/// Presets for the reference pairs: (T, S) on one field.
std::pair<PLMap, PLMap> preset_pair(const std::string& name) {
    if (name == "kn1") return kn_pair(1);
    if (name == "kn2") return kn_pair(2);
    if (name == "tent") {
        PLMap tent = flip_radix_map(2, {0, 1});
        return {beta_map(tent.field()), tent};
    }
    throw ParseError("unknown pair preset '" + name + "' (want kn1|kn2|tent)");
}

int cmd_classify(const CommonOpts& o) {
    NumberField f = make_field(o);
    BetaClass c = classify(f);
    std::ostringstream line;
    line << to_string(c) << ", d=" << f.degree();
    std::vector<size_t> others = f.other_conjugates();
    if (!others.empty()) {
        line << (others.size() == 1 ? ", conjugate ~" : ", conjugates ~");
        for (size_t i : others) {
            CBall b = f.conjugate(i, Rat(1, Int(1) << 30));
            line << " " << rat_to_decimal(b.re, 4);
            if (b.im != 0) line << (b.im > 0 ? "+" : "") << rat_to_decimal(b.im, 4) << "i";
        }
    }
    line << "\n";
    emit(o.out, line.str());
    return c == BetaClass::Undecided ? 1 : 0;
}

int cmd_orbit(const CommonOpts& o, size_t N, bool numeric, unsigned bits) {
    NumberField f = make_field(o);
    PLMap map = parse_map(f, o.map_spec);
    if (!numeric) {
        ExactOrbit orb = iterate_exact(map, parse_fe(f, o.x0), N);
        emit(o.out, orbit_csv(orb.points));
        return 0;
    }
    FieldElement seed = parse_fe(f, o.x0);
    if (!seed.is_rational()) throw ParseError("numeric orbit wants a rational --x0");
    NumericOrbit orb = iterate_numeric(map, seed.as_rational(), N, std::max(bits, precision_floor()));
    std::ostringstream out;
    out << "n,lo,hi\n";
    for (size_t i = 0; i < orb.points.size(); ++i)
        out << i << "," << rat_to_decimal(orb.points[i].lo, 18) << ","
            << rat_to_decimal(orb.points[i].hi, 18) << "\n";
    out << "# valid_prefix=" << orb.valid_prefix << " bits=" << orb.bits << "\n";
    emit(o.out, out.str());
    return 0;
}

int cmd_period(const CommonOpts& o, size_t budget) {
    NumberField f = make_field(o);
    PLMap map = parse_map(f, o.map_spec);
    try {
        PeriodicityCertificate c = detect_eventual_period(map, parse_fe(f, o.x0), budget);
        std::cout << "preperiod " << c.preperiod << " period " << c.period << "\n";
        if (!o.out.empty()) write_file(o.out, certificate_json(c));
        return 0;
    } catch (const BudgetExceeded& e) {
        std::cout << "no repeat within budget (lattice bound " << e.lattice_bound << ")\n";
        return 1;
    }
}

int cmd_density_parry(const CommonOpts& o, unsigned N, const std::string& at) {
    NumberField f = make_field(o);
    ParryDensity p = parry_density_profile(f, N);
    if (!at.empty()) {
        DensityValue v = eval_parry(p, parse_fe(f, at));
        std::cout << "h(" << at << ") = " << v.value.to_decimal(18) << " +- "
                  << rat_to_decimal(v.tail, 24) << "\n";
        return 0;
    }
    std::vector<FieldElement> bps{FieldElement::rational(f, 0), FieldElement::rational(f, 1)};
    for (const FieldElement& v : p.orbit_of_one)
        if (v.sign() > 0 && (v - FieldElement::rational(f, 1)).sign() < 0) bps.push_back(v);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    std::vector<FieldElement> vals;
    for (size_t i = 0; i + 1 < bps.size(); ++i) vals.push_back(eval_parry(p, bps[i]).value);
    emit(o.out, density_csv(bps, vals));
    DensityValue nc = normalize_check(p);
    int defect = ((nc.value - FieldElement::rational(f, 1)).abs() - Rat(3) * nc.tail).sign();
    return defect <= 0 ? 0 : 1;
}

int cmd_density_st(const CommonOpts& o, const std::string& t, unsigned N, const std::string& csv) {
    NumberField f = make_field(o);
    StDensityProfile p = st_profile(f, parse_fe(f, t), N);
    emit(o.out, density_table_json(p));
    if (!csv.empty()) write_file(csv, density_csv(p.breakpoints, p.values));
    BoundsReport br = bounds_check(p);
    DensityValue nc = normalize_check(p);
    FieldElement defect = (nc.value - FieldElement::rational(f, 1)).abs();
    bool norm_ok = (defect - Rat(3) * nc.tail).sign() <= 0;
    std::cerr << "bounds [" << br.lower.to_decimal(6) << ", " << br.upper.to_decimal(6)
              << "] min " << br.min_value.to_decimal(6) << " max " << br.max_value.to_decimal(6)
              << (br.passed ? " pass" : " FAIL") << "; integral defect "
              << defect.to_decimal(24) << (norm_ok ? " pass" : " FAIL") << "\n";
    bool beta_ge_2 = br.beta_at_least_two;
    return (norm_ok && (br.passed || !beta_ge_2)) ? 0 : 1;
}

int cmd_enum_fe(const CommonOpts& o, const std::string& digits, const std::string& lo,
                const std::string& hi, const std::string& method, bool diff) {
    NumberField f = make_field(o);
    std::vector<FieldElement> elems;
    {
        std::string cur;
        for (char c : digits + ",") {
            if (c == ',') {
                if (!cur.empty()) elems.push_back(parse_fe(f, cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
    }
    DigitSet E = DigitSet::make(f, std::move(elems));
    DigitSet D = diff ? E.difference() : E;
    EnumMethod m = method == "bfs" ? EnumMethod::DigitBfs : EnumMethod::LatticeBox;
    WindowEnumeration w = enumerate_window(D, parse_fe(f, lo), parse_fe(f, hi), m);
    Rat R = separation_bound(diff ? D : E.difference());
    try {
        GapReport rep = verify_min_gap(w, R);
        emit(o.out, gap_json(rep, R));
        return 0;
    } catch (const GapViolation& e) {
        std::cerr << e.what() << "\n";
        GapReport rep;
        rep.count = w.elements.size();
        rep.passed = false;
        emit(o.out, gap_json(rep, R));
        return 1;
    }
}

int cmd_couple(const CommonOpts& o, const std::string& dir, const std::string& pair, size_t N) {
    PLMap T, S;
    NumberField f;
    if (!pair.empty()) {
        std::tie(T, S) = preset_pair(pair);
        f = T.field();
    } else {
        f = make_field(o);
        T = beta_map(f);
        S = parse_map(f, o.map_spec);
    }
    WindowEnumeration w = coupling_window(S);
    FieldElement x0 = parse_fe(f, o.x0);
    CouplingReport rep = dir == "reverse" ? coupling_reverse(T, S, x0, N, w)
                                          : coupling_forward(T, S, x0, N, w);
    emit(o.out, coupling_json(rep));
    return rep.violations.empty() ? 0 : 1;
}

int cmd_compare(const CommonOpts& o, const std::string& pair, size_t N, unsigned bins,
                std::optional<std::uint64_t> seed, const std::string& ref_s,
                const std::string& t_coords, unsigned n_density, const std::string& csv_t,
                const std::string& csv_s) {
    PLMap T, S;
    NumberField f;
    if (!pair.empty()) {
        std::tie(T, S) = preset_pair(pair);
        f = T.field();
    } else {
        f = make_field(o);
        T = beta_map(f);
        S = parse_map(f, o.map_spec);
    }
    FieldElement x0 = seed ? FieldElement::rational(f, seed_rational(*seed)) : parse_fe(f, o.x0);

    std::vector<Rat> ref_T = f.is_trivial() ? lebesgue_bin_masses(bins)
                                            : parry_bin_masses(parry_density_profile(f, n_density), bins);
    std::vector<Rat> ref_S;
    if (ref_s == "lebesgue") {
        ref_S = lebesgue_bin_masses(bins);
    } else if (ref_s == "st") {
        ref_S = profile_bin_masses(st_profile(f, parse_fe(f, t_coords), n_density), bins);
    } else {
        throw ParseError("unknown --refS '" + ref_s + "' (want lebesgue|st)");
    }

    GenericReport rep = generic_report(T, ref_T, S, ref_S, x0, N, bins);
    emit(o.out, generic_json(rep));
    if (!csv_t.empty()) write_file(csv_t, histogram_csv(rep.hist_T, rep.ref_T));
    if (!csv_s.empty()) write_file(csv_s, histogram_csv(rep.hist_S, rep.ref_S));
    return rep.coupling_violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact dynamics of piecewise linear interval maps with Pisot-power slopes"};
    app.require_subcommand(1);

    CommonOpts o;
    size_t N = 100, budget = 1000000;
    unsigned bins = 32, n_density = 64, bits = 64;
    bool numeric = false, diff = false;
    std::string at, t_coords = "0", csv, digits = "0,1", lo = "0", hi = "1", method = "box";
    std::string dir = "forward", pair, ref_s = "lebesgue", csv_t, csv_s, dmode;
    std::optional<std::uint64_t> seed;

    auto add_common = [&](CLI::App* c, bool with_map = true) {
        c->add_option("--poly", o.poly, "minimal polynomial c0,c1,...,cd (monic)");
        c->add_option("--root", o.root, "isolating root interval lo:hi");
        if (with_map) {
            c->add_option("--map,--builtin", o.map_spec, "map spec (default beta)");
            c->add_option("--x0", o.x0, "exact start point, power-basis coords n/d:n/d:...");
        }
        c->add_option("--out", o.out, "output artifact path (default stdout)");
    };

    CLI::App* classify_cmd = app.add_subcommand("classify", "classify beta from its polynomial");
    add_common(classify_cmd, false);

    CLI::App* orbit_cmd = app.add_subcommand("orbit", "exact or enclosure orbit");
    add_common(orbit_cmd);
    orbit_cmd->add_option("--N", N, "steps");
    orbit_cmd->add_flag("--numeric", numeric, "interval iteration instead of exact");
    orbit_cmd->add_option("--bits", bits, "working precision for --numeric");

    CLI::App* period_cmd = app.add_subcommand("period", "eventual periodicity certificate");
    add_common(period_cmd);
    period_cmd->add_option("--budget", budget, "step budget");

    CLI::App* density_cmd = app.add_subcommand("density", "invariant density tables");
    density_cmd->add_option("mode", dmode, "parry|st")->required();
    add_common(density_cmd, false);
    density_cmd->add_option("--N", n_density, "series truncation");
    density_cmd->add_option("--x", at, "evaluate at this point (parry)");
    density_cmd->add_option("--t", t_coords, "S_t parameter (st)");
    density_cmd->add_option("--csv", csv, "also write the table as CSV (st)");

    CLI::App* enum_cmd = app.add_subcommand("enum-fe", "enumerate F_E in a window");
    add_common(enum_cmd, false);
    enum_cmd->add_option("--digits", digits, "digit set, comma separated coords");
    enum_cmd->add_option("--lo", lo, "window left endpoint");
    enum_cmd->add_option("--hi", hi, "window right endpoint");
    enum_cmd->add_option("--method", method, "box|bfs");
    enum_cmd->add_flag("--diff", diff, "enumerate the difference set E-E");

    CLI::App* couple_cmd = app.add_subcommand("couple", "coupling between T-time and S-time");
    couple_cmd->add_option("direction", dir, "forward|reverse")->required();
    add_common(couple_cmd);
    couple_cmd->add_option("--pair", pair, "preset pair kn1|kn2|tent");
    couple_cmd->add_option("--N", N, "steps");

    CLI::App* compare_cmd = app.add_subcommand("compare", "occupation statistics of T vs S");
    add_common(compare_cmd);
    compare_cmd->add_option("--pair", pair, "preset pair kn1|kn2|tent");
    compare_cmd->add_option("--N", N, "orbit length");
    compare_cmd->add_option("--bins", bins, "histogram bins");
    compare_cmd->add_option("--seed", seed, "PRNG state for a 512-bit rational seed");
    compare_cmd->add_option("--refS", ref_s, "reference for S: lebesgue|st");
    compare_cmd->add_option("--t", t_coords, "S_t parameter when --refS st");
    compare_cmd->add_option("--N-density", n_density, "density truncation for references");
    compare_cmd->add_option("--csvT", csv_t, "histogram CSV for T");
    compare_cmd->add_option("--csvS", csv_s, "histogram CSV for S");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(classify_cmd)) return cmd_classify(o);
        if (app.got_subcommand(orbit_cmd)) return cmd_orbit(o, N, numeric, bits);
        if (app.got_subcommand(period_cmd)) return cmd_period(o, budget);
        if (app.got_subcommand(density_cmd)) {
            if (dmode == "parry") return cmd_density_parry(o, n_density, at);
            if (dmode == "st") return cmd_density_st(o, t_coords, n_density, csv);
            throw ParseError("density mode must be parry or st");
        }
        if (app.got_subcommand(enum_cmd)) return cmd_enum_fe(o, digits, lo, hi, method, diff);
        if (app.got_subcommand(couple_cmd)) return cmd_couple(o, dir, pair, N);
        if (app.got_subcommand(compare_cmd))
            return cmd_compare(o, pair, N, bins, seed, ref_s, t_coords, n_density, csv_t, csv_s);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
