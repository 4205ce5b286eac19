#include "pisotdyn/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

namespace pisotdyn {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

Rat poly_eval(const std::vector<Int>& coeffs, const Rat& x) {
    Rat acc = 0;
    for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + Rat(coeffs[i]);
    return acc;
}

ordered_json fe_json(const FieldElement& x) {
    return ordered_json{{"coords", fe_coords(x)}, {"decimal", x.to_decimal(20)}};
}

ordered_json rat_json(const Rat& r) {
    return ordered_json{{"exact", rat_to_string(r)}, {"decimal", rat_to_decimal(r, 20)}};
}

int parse_sign(const std::string& tok) {
    std::string t = trim(tok);
    if (t == "+" || t == "1" || t == "+1") return 1;
    if (t == "-" || t == "-1") return -1;
    throw ParseError("parse_map: bad sign token '" + tok + "'");
}

}  // namespace

RatInterval bracket_largest_root(const std::vector<Int>& coeffs) {
    if (coeffs.size() < 2 || coeffs.back() != 1)
        throw ParseError("bracket_largest_root: need a monic polynomial of degree >= 1");
    Rat bound(2);
    for (size_t i = 0; i + 1 < coeffs.size(); ++i) {
        Rat c = Rat(1) + Rat(coeffs[i] < 0 ? -coeffs[i] : coeffs[i]);
        if (c > bound) bound = c;
    }
    Rat step(1, 16);
    Rat hi = bound;  // monic: positive beyond the Cauchy bound
    Rat lo = hi - step;
    while (lo > -bound && poly_eval(coeffs, lo) > 0) {
        hi = lo;
        lo -= step;
    }
    if (poly_eval(coeffs, lo) > 0)
        throw ParseError("bracket_largest_root: no sign change found on the grid");
    Rat width(1, 1024);
    while (hi - lo > width) {
        Rat mid = (lo + hi) / 2;
        Rat v = poly_eval(coeffs, mid);
        if (v == 0) return RatInterval(mid - width / 2, mid + width / 2);
        (v > 0 ? hi : lo) = mid;
    }
    return RatInterval(lo, hi);
}

NumberField parse_field(const std::string& spec) {
    std::vector<Int> coeffs;
    bool have_root = false;
    RatInterval root(Rat(0), Rat(0));
    for (const std::string& part : split(spec, ';')) {
        std::string p = trim(part);
        if (p.empty()) continue;
        size_t eq = p.find('=');
        if (eq == std::string::npos) throw ParseError("parse_field: expected key=value in '" + p + "'");
        std::string key = trim(p.substr(0, eq)), val = trim(p.substr(eq + 1));
        if (key == "poly") {
            for (const std::string& tok : split(val, ','))
                coeffs.push_back(Int(trim(tok).c_str()));
        } else if (key == "root") {
            std::vector<std::string> ends = split(val, ':');
            if (ends.size() != 2) throw ParseError("parse_field: root wants lo:hi");
            root = RatInterval(parse_rational(trim(ends[0])), parse_rational(trim(ends[1])));
            have_root = true;
        } else {
            throw ParseError("parse_field: unknown key '" + key + "'");
        }
    }
    if (coeffs.empty()) throw ParseError("parse_field: missing poly=");
    if (!have_root) root = bracket_largest_root(coeffs);
    return NumberField::make(std::move(coeffs), root);
}

std::string emit_field(const NumberField& field) {
    std::ostringstream out;
    out << "poly=";
    const std::vector<Int>& c = field.min_poly();
    for (size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << c[i];
    // outward dyadic rounding keeps containment and keeps the spec short
    RatInterval r = field.root_enclosure(Rat(1, 1024));
    out << ";root=" << rat_to_string(dyadic_floor(r.lo, 24)) << ":"
        << rat_to_string(dyadic_ceil(r.hi, 24));
    return out.str();
}

std::string fe_coords(const FieldElement& x) {
    std::ostringstream out;
    for (size_t i = 0; i < x.coords().size(); ++i)
        out << (i ? ":" : "") << rat_to_string(x.coords()[i]);
    return out.str();
}

FieldElement parse_fe(const NumberField& field, const std::string& coords) {
    std::vector<Rat> c;
    for (const std::string& tok : split(coords, ':')) c.push_back(parse_rational(trim(tok)));
    if (c.size() > static_cast<size_t>(field.degree()))
        throw ParseError("parse_fe: more coordinates than the field degree");
    c.resize(static_cast<size_t>(field.degree()), Rat(0));
    return FieldElement(field, std::move(c));
}

PLMap parse_map(const NumberField& field, const std::string& spec) {
    std::string s = trim(spec);
    size_t colon = s.find(':');
    std::string head = colon == std::string::npos ? s : s.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (head == "beta") return beta_map(field);
    if (head == "flipped") return flipped_beta_counterexample(field);
    if (head == "st") return st_map(field, parse_fe(field, rest));
    if (head == "handelman") {
        std::vector<Int> vec;
        std::vector<unsigned> arr;
        std::vector<int> signs;
        for (const std::string& part : split(rest, ';')) {
            std::string p = trim(part);
            size_t eq = p.find('=');
            if (eq == std::string::npos) throw ParseError("parse_map: expected key=value in '" + p + "'");
            std::string key = trim(p.substr(0, eq)), val = trim(p.substr(eq + 1));
            for (const std::string& tok : split(val, ',')) {
                if (key == "vec") vec.push_back(Int(trim(tok).c_str()));
                else if (key == "arr") arr.push_back(static_cast<unsigned>(std::stoul(trim(tok))));
                else if (key == "signs") signs.push_back(parse_sign(tok));
                else throw ParseError("parse_map: unknown handelman key '" + key + "'");
            }
        }
        return handelman_map(field, vec, arr, signs);
    }
    if (head == "branches") {
        std::string label = "custom";
        std::vector<Branch> branches;
        for (const std::string& part : split(rest, ';')) {
            std::string p = trim(part);
            if (p.empty()) continue;
            if (p.rfind("label=", 0) == 0) {
                label = trim(p.substr(6));
                continue;
            }
            Branch br;
            br.b = FieldElement::rational(field, 0);
            for (const std::string& item : split(p, '|')) {
                std::string q = trim(item);
                size_t eq = q.find('=');
                if (eq == std::string::npos)
                    throw ParseError("parse_map: expected key=value in '" + q + "'");
                std::string key = trim(q.substr(0, eq)), val = trim(q.substr(eq + 1));
                if (key == "l") br.left = parse_fe(field, val);
                else if (key == "r") br.right = parse_fe(field, val);
                else if (key == "lc") br.left_closed = val == "1";
                else if (key == "rc") br.right_closed = val == "1";
                else if (key == "eps") br.epsilon = parse_sign(val);
                else if (key == "m") br.m = static_cast<unsigned>(std::stoul(val));
                else if (key == "b") br.b = parse_fe(field, val);
                else throw ParseError("parse_map: unknown branch key '" + key + "'");
            }
            branches.push_back(std::move(br));
        }
        return PLMap::build(field, std::move(branches), label);
    }
    throw ParseError("parse_map: unknown map spec '" + head + "'");
}

std::string emit_map(const PLMap& map) {
    std::ostringstream out;
    out << "branches:label=" << map.label();
    for (const Branch& br : map.branches()) {
        out << ";l=" << fe_coords(br.left) << "|r=" << fe_coords(br.right)
            << "|lc=" << (br.left_closed ? 1 : 0) << "|rc=" << (br.right_closed ? 1 : 0)
            << "|eps=" << (br.epsilon > 0 ? "+1" : "-1") << "|m=" << br.m
            << "|b=" << fe_coords(br.b);
    }
    return out.str();
}

Rat seed_rational(std::uint64_t state, unsigned bits) {
    if (bits < 2) throw ParseError("seed_rational: need at least 2 bits");
    std::mt19937_64 rng(state);
    auto draw = [&](unsigned b) {
        Int v = 0;
        for (unsigned i = 0; i < b; i += 64) {
            v <<= 64;
            v += Int(rng());
        }
        Int mask = (Int(1) << b) - 1;
        return Int(v & mask);
    };
    Int q = draw(bits) | (Int(1) << (bits - 1)) | 1;  // odd, exactly `bits` bits
    Int a = draw(bits) % q;
    return Rat(a, q);
}

std::string coupling_json(const CouplingReport& rep) {
    ordered_json j;
    j["direction"] = rep.direction == Direction::Forward ? "forward" : "reverse";
    j["M"] = rep.M;
    j["steps"] = rep.k.size();
    j["window_size"] = rep.window_size;
    j["k"] = rep.k;
    if (rep.direction == Direction::Reverse) j["j"] = rep.j;
    ordered_json offs = ordered_json::array();
    for (const FieldElement& o : rep.offsets) offs.push_back(fe_json(o));
    j["offsets"] = std::move(offs);
    j["violations"] = rep.violations;
    return j.dump(2) + "\n";
}

std::string generic_json(const GenericReport& rep) {
    ordered_json j;
    j["label_T"] = rep.label_T;
    j["label_S"] = rep.label_S;
    j["N"] = rep.N;
    j["bins"] = rep.bins;
    j["seed"] = rep.seed;
    auto rats = [](const std::vector<Rat>& v) {
        ordered_json a = ordered_json::array();
        for (const Rat& r : v) a.push_back(rat_json(r));
        return a;
    };
    j["hist_T"] = rats(rep.hist_T);
    j["hist_S"] = rats(rep.hist_S);
    j["ref_T"] = rats(rep.ref_T);
    j["ref_S"] = rats(rep.ref_S);
    j["sup_T"] = rat_json(rep.sup_T);
    j["sup_S"] = rat_json(rep.sup_S);
    j["max_ratio_T"] = rat_json(rep.max_ratio_T);
    j["max_ratio_S"] = rat_json(rep.max_ratio_S);
    j["M"] = rep.M;
    j["coupling_N"] = rep.coupling_N;
    j["coupling_violations"] = rep.coupling_violations;
    return j.dump(2) + "\n";
}

std::string gap_json(const GapReport& rep, const Rat& bound) {
    ordered_json j;
    j["count"] = rep.count;
    j["separation_bound"] = rat_json(bound);
    if (rep.min_gap) j["min_gap"] = fe_json(*rep.min_gap);
    j["passed"] = rep.passed;
    return j.dump(2) + "\n";
}

std::string density_table_json(const StDensityProfile& p) {
    ordered_json j;
    j["field"] = emit_field(p.field);
    j["t"] = fe_json(p.t);
    j["N"] = p.N;
    j["C"] = fe_json(p.C);
    j["normalizer"] = fe_json(p.normalizer);
    j["tail"] = rat_json(p.eval_tail);
    ordered_json table = ordered_json::array();
    for (size_t i = 0; i + 1 < p.breakpoints.size(); ++i)
        table.push_back(ordered_json{{"left", fe_json(p.breakpoints[i])},
                                     {"right", fe_json(p.breakpoints[i + 1])},
                                     {"value", fe_json(p.values[i])}});
    j["table"] = std::move(table);
    return j.dump(2) + "\n";
}

std::string certificate_json(const PeriodicityCertificate& c) {
    ordered_json j;
    j["preperiod"] = c.preperiod;
    j["period"] = c.period;
    j["witness"] = fe_json(c.witness);
    j["steps_used"] = c.steps_used;
    return j.dump(2) + "\n";
}

std::string histogram_csv(const std::vector<Rat>& hist, const std::vector<Rat>& ref) {
    if (hist.size() != ref.size()) throw ParseError("histogram_csv: length mismatch");
    std::ostringstream out;
    out << "bin,frequency_exact,frequency,reference_exact,reference\n";
    for (size_t i = 0; i < hist.size(); ++i)
        out << i << "," << rat_to_string(hist[i]) << "," << rat_to_decimal(hist[i], 12) << ","
            << rat_to_string(ref[i]) << "," << rat_to_decimal(ref[i], 12) << "\n";
    return out.str();
}

std::string density_csv(const std::vector<FieldElement>& breakpoints,
                        const std::vector<FieldElement>& values) {
    if (breakpoints.size() != values.size() + 1) throw ParseError("density_csv: length mismatch");
    std::ostringstream out;
    out << "x_coords,x,value_coords,value\n";
    for (size_t i = 0; i < values.size(); ++i) {
        out << fe_coords(breakpoints[i]) << "," << breakpoints[i].to_decimal(12) << ","
            << fe_coords(values[i]) << "," << values[i].to_decimal(12) << "\n";
        // repeat the value at the right endpoint for step-function plots
        out << fe_coords(breakpoints[i + 1]) << "," << breakpoints[i + 1].to_decimal(12) << ","
            << fe_coords(values[i]) << "," << values[i].to_decimal(12) << "\n";
    }
    return out.str();
}

std::string orbit_csv(const std::vector<FieldElement>& points) {
    std::ostringstream out;
    out << "n,coords,decimal\n";
    for (size_t i = 0; i < points.size(); ++i)
        out << i << "," << fe_coords(points[i]) << "," << points[i].to_decimal(18) << "\n";
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ParseError("write_file: cannot open " + path);
    f << content;
    if (!f) throw ParseError("write_file: write failed for " + path);
}

}  // namespace pisotdyn
