#include "lagsurg/io.hpp"

#include "lagsurg/errors.hpp"

#include <fstream>

namespace lagsurg::io {

using novikov::Element;
using novikov::Rational;

namespace {

const json& field(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) fail(ErrorCode::ParseError, where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(ErrorCode::ParseError, where + ": missing field '" + key + "'");
    return *it;
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
    const json& v = field(j, key, where);
    try {
        return v.get<T>();
    } catch (const json::exception& e) {
        fail(ErrorCode::ParseError, where + "." + key + ": " + e.what());
    }
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return get<T>(j, key, where);
}

Rational rational_field(const json& j, const std::string& key, const std::string& where) {
    const json& v = field(j, key, where);
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (!v.is_string()) fail(ErrorCode::ParseError, where + "." + key + ": expected \"p/q\"");
    try {
        return novikov::parse_rational(v.get<std::string>());
    } catch (const Error& e) {
        fail(ErrorCode::ParseError, where + "." + key + ": " + e.detail());
    }
}

std::string kind_name(ainfty::GenKind k) {
    switch (k) {
    case ainfty::GenKind::Cell: return "cell";
    case ainfty::GenKind::SelfIntersection: return "si";
    case ainfty::GenKind::UnitWhite: return "unit_white";
    case ainfty::GenKind::UnitGrey: return "unit_grey";
    }
    return "";
}

json cells_json(const std::vector<cellular::Cell>& cells) {
    json a = json::array();
    for (const auto& c : cells) a.push_back({{"name", c.name}, {"dim", c.dim}});
    return a;
}

json boundary_json(const cellular::BoundaryMap& m) {
    json a = json::array();
    for (const auto& [k, v] : m) a.push_back({{"from", k.first}, {"to", k.second}, {"coef", v}});
    return a;
}

std::vector<cellular::Cell> cells_from(const json& j, const std::string& where) {
    std::vector<cellular::Cell> out;
    if (!j.is_array()) fail(ErrorCode::ParseError, where + ": expected an array");
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string w = where + "[" + std::to_string(i) + "]";
        out.push_back({get<std::string>(j[i], "name", w), get<int>(j[i], "dim", w)});
    }
    return out;
}

cellular::BoundaryMap boundary_from(const json& j, const std::string& where) {
    cellular::BoundaryMap m;
    if (!j.is_array()) fail(ErrorCode::ParseError, where + ": expected an array");
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string w = where + "[" + std::to_string(i) + "]";
        m[{get<std::string>(j[i], "from", w), get<std::string>(j[i], "to", w)}] += get<std::int64_t>(j[i], "coef", w);
    }
    return m;
}

json local_json(const std::map<std::string, Element>& m) {
    json o = json::object();
    for (const auto& [k, v] : m) o[k] = to_json(v);
    return o;
}

std::map<std::string, Element> local_from(const json& j, const std::string& where) {
    std::map<std::string, Element> m;
    if (j.is_null()) return m;
    if (!j.is_object()) fail(ErrorCode::ParseError, where + ": expected an object");
    for (const auto& [k, v] : j.items()) m[k] = element_from_json(v, where + "." + k);
    return m;
}

ainfty::Generator generator_from(const json& j, const std::string& w) {
    ainfty::Generator g;
    g.name = get<std::string>(j, "name", w);
    std::string kind = get_or<std::string>(j, "kind", "si", w);
    if (kind != "si") fail(ErrorCode::ParseError, w + ": only self-intersection generators are listed");
    g.kind = ainfty::GenKind::SelfIntersection;
    g.conjugate = get<std::string>(j, "conjugate", w);
    g.parity = get<int>(j, "parity", w) & 1;
    return g;
}

std::vector<ainfty::Disk> disks_from(const json& j, const std::string& where) {
    std::vector<ainfty::Disk> out;
    if (!j.is_array()) fail(ErrorCode::ParseError, where + ": expected an array");
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(disk_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

cellular::StandardBall ball_from(const json& j, const std::string& w) {
    return {get<std::string>(j, "top", w), get<std::string>(j, "sphere", w), get<std::string>(j, "point", w)};
}

json ball_json(const cellular::StandardBall& b) { return {{"top", b.top}, {"sphere", b.sphere}, {"point", b.point}}; }

} // namespace

json to_json(const Element& e) {
    json terms = json::array();
    for (const auto& t : e.terms())
        terms.push_back({{"exp", novikov::format_rational(t.exp)}, {"re", t.coef.real()}, {"im", t.coef.imag()}});
    return {{"terms", terms}, {"trunc", novikov::format_ext(e.trunc())}};
}

Element element_from_json(const json& j, const std::string& where) {
    if (j.is_number()) return Element(j.get<double>());
    const json& terms = field(j, "terms", where);
    if (!terms.is_array()) fail(ErrorCode::ParseError, where + ".terms: expected an array");
    std::vector<novikov::Term> ts;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        std::string w = where + ".terms[" + std::to_string(i) + "]";
        ts.push_back({rational_field(terms[i], "exp", w),
                      {get_or<double>(terms[i], "re", 0.0, w), get_or<double>(terms[i], "im", 0.0, w)}});
    }
    novikov::Ext t = novikov::Ext::infinity();
    if (j.contains("trunc")) {
        try {
            t = novikov::parse_ext(get<std::string>(j, "trunc", where));
        } catch (const Error& e) {
            fail(ErrorCode::ParseError, where + ".trunc: " + e.detail());
        }
    }
    return Element::from_terms(std::move(ts), t);
}

json to_json(const cellular::CellComplex& C) {
    json j = {{"dim", C.n}, {"cells", cells_json(C.cells)}, {"boundary", boundary_json(C.boundary)}};
    if (!C.dual_is_primal()) {
        j["dual_cells"] = cells_json(C.dual_cells);
        j["dual_boundary"] = boundary_json(C.dual_boundary);
    }
    json d = json::array();
    for (const auto& [k, v] : C.diagonal) d.push_back({{"cell", k.first}, {"dual", k.second}, {"coef", v}});
    j["diagonal"] = d;
    return j;
}

cellular::CellComplex complex_from_json(const json& j) {
    const std::string w = "complex";
    cellular::CellComplex C;
    C.n = get<int>(j, "dim", w);
    C.cells = cells_from(field(j, "cells", w), w + ".cells");
    C.boundary = boundary_from(field(j, "boundary", w), w + ".boundary");
    if (j.contains("dual_cells")) {
        C.dual_cells = cells_from(j["dual_cells"], w + ".dual_cells");
        C.dual_boundary = boundary_from(field(j, "dual_boundary", w), w + ".dual_boundary");
    }
    const json& d = field(j, "diagonal", w);
    if (!d.is_array()) fail(ErrorCode::ParseError, w + ".diagonal: expected an array");
    for (std::size_t i = 0; i < d.size(); ++i) {
        std::string wi = w + ".diagonal[" + std::to_string(i) + "]";
        C.diagonal[{get<std::string>(d[i], "cell", wi), get<std::string>(d[i], "dual", wi)}] +=
            get<std::int64_t>(d[i], "coef", wi);
    }
    return C;
}

json to_json(const ainfty::Cochain& c) {
    json o = json::object();
    for (const auto& [g, v] : c.coeffs()) o[g] = to_json(v);
    return o;
}

ainfty::Cochain cochain_from_json(const json& j) {
    if (!j.is_object()) fail(ErrorCode::ParseError, "cochain: expected an object");
    ainfty::Cochain c;
    for (const auto& [k, v] : j.items()) c.add(k, element_from_json(v, "cochain." + k));
    return c;
}

json to_json(const ainfty::Disk& d) {
    json hol = json::array();
    for (const auto& [l, k] : d.holonomy) hol.push_back({l, k});
    json j = {{"inputs", d.inputs},
              {"output", d.output},
              {"area", novikov::format_rational(d.area)},
              {"sign", d.sign},
              {"sym", d.sym.str()},
              {"holonomy", hol},
              {"constant_on_handle", d.constant_on_handle}};
    if (!d.annotations.empty()) j["annotations"] = d.annotations;
    return j;
}

ainfty::Disk disk_from_json(const json& j, const std::string& w) {
    ainfty::Disk d;
    d.inputs = get_or<std::vector<std::string>>(j, "inputs", {}, w);
    d.output = get<std::string>(j, "output", w);
    d.area = rational_field(j, "area", w);
    d.sign = get_or<int>(j, "sign", 1, w);
    if (j.contains("sym")) {
        const json& s = j["sym"];
        try {
            d.sym = s.is_number_integer() ? ainfty::Weight(s.get<std::int64_t>()) : ainfty::Weight(s.get<std::string>());
        } catch (const std::exception& e) {
            fail(ErrorCode::ParseError, w + ".sym: " + e.what());
        }
    }
    if (j.contains("holonomy")) {
        const json& h = j["holonomy"];
        if (!h.is_array()) fail(ErrorCode::ParseError, w + ".holonomy: expected an array");
        for (const auto& t : h) {
            if (!t.is_array() || t.size() != 2 || !t[0].is_string() || !t[1].is_number_integer())
                fail(ErrorCode::ParseError, w + ".holonomy: entries are [label, exponent]");
            d.holonomy.push_back({t[0].get<std::string>(), t[1].get<int>()});
        }
    }
    d.constant_on_handle = get_or<bool>(j, "constant_on_handle", false, w);
    d.annotations = get_or<std::map<std::string, std::string>>(j, "annotations", {}, w);
    return d;
}

json to_json(const ainfty::AlgebraOptions& o) {
    return {{"trunc", novikov::format_ext(o.trunc)},
            {"koszul_units", o.koszul_units},
            {"classical_boundary", o.classical_boundary},
            {"classical_grey", o.classical_grey},
            {"delta_gap", novikov::format_rational(o.delta_gap)}};
}

ainfty::AlgebraOptions options_from_json(const json& j) {
    ainfty::AlgebraOptions o;
    if (j.is_null()) return o;
    const std::string w = "options";
    if (j.contains("trunc")) {
        try {
            o.trunc = novikov::parse_ext(get<std::string>(j, "trunc", w));
        } catch (const Error& e) {
            fail(ErrorCode::ParseError, w + ".trunc: " + e.detail());
        }
    }
    o.koszul_units = get_or<bool>(j, "koszul_units", o.koszul_units, w);
    o.classical_boundary = get_or<bool>(j, "classical_boundary", o.classical_boundary, w);
    o.classical_grey = get_or<bool>(j, "classical_grey", o.classical_grey, w);
    if (j.contains("delta_gap")) o.delta_gap = rational_field(j, "delta_gap", w);
    return o;
}

json to_json(const ainfty::Algebra& A) {
    json gens = json::array();
    for (const auto& g : A.si_generators())
        gens.push_back({{"name", g.name}, {"kind", kind_name(g.kind)}, {"conjugate", g.conjugate}, {"parity", g.parity}});
    json disks = json::array();
    for (const auto& d : A.atlas()) disks.push_back(to_json(d));
    json atlas = {{"generators", gens},
                  {"disks", disks},
                  {"delta_gap", novikov::format_rational(A.options().delta_gap)},
                  {"local_system", local_json(A.local_system())},
                  {"unit_white", A.unit_white()},
                  {"unit_grey", A.unit_grey()}};
    return {{"complex", to_json(A.complex())}, {"atlas", atlas}, {"options", to_json(A.options())}};
}

ainfty::Algebra algebra_from_json(const json& j) {
    auto C = complex_from_json(field(j, "complex", "algebra"));
    const json& a = field(j, "atlas", "algebra");
    const std::string w = "atlas";
    std::vector<ainfty::Generator> si;
    const json& gens = get_or<json>(a, "generators", json::array(), w);
    for (std::size_t i = 0; i < gens.size(); ++i) si.push_back(generator_from(gens[i], w + ".generators[" + std::to_string(i) + "]"));
    auto disks = disks_from(field(a, "disks", w), w + ".disks");
    auto opts = options_from_json(j.contains("options") ? j["options"] : json());
    if (a.contains("delta_gap")) opts.delta_gap = rational_field(a, "delta_gap", w);
    auto local = local_from(a.contains("local_system") ? a["local_system"] : json(), w + ".local_system");
    return ainfty::Algebra(std::move(C), std::move(si), std::move(disks), std::move(local), opts,
                           get_or<std::string>(a, "unit_white", "1w", w), get_or<std::string>(a, "unit_grey", "1g", w));
}

json to_json(const SurgeryInput& s) {
    const auto& d = s.data;
    json j = {{"x", d.x},
              {"xbar", d.xbar},
              {"A_eps", novikov::format_rational(d.A_eps)},
              {"lambda", d.lambda},
              {"sigma_n", d.sigma_n},
              {"plus", ball_json(d.plus)},
              {"minus", ball_json(d.minus)},
              {"branch", d.branch},
              {"sign_flags",
               {{"sigma_1", d.sigma_1_sign},
                {"sigma_n", d.sigma_n_sign},
                {"meridian_minus", d.meridian_minus},
                {"literal_dpsi", d.literal_dpsi}}},
              {"caps", {{"R", s.caps.R}, {"S", s.caps.S}, {"max_tail", s.caps.max_tail}}},
              {"annotated", s.annotated}};
    if (s.target) j["target_complex"] = to_json(*s.target);
    if (!s.target_local.empty()) j["local_system"] = local_json(s.target_local);
    return j;
}

SurgeryInput surgery_from_json(const json& j) {
    const std::string w = "surgery";
    SurgeryInput s;
    auto& d = s.data;
    d.x = get<std::string>(j, "x", w);
    d.xbar = get<std::string>(j, "xbar", w);
    d.A_eps = rational_field(j, "A_eps", w);
    d.lambda = get_or<std::string>(j, "lambda", d.lambda, w);
    d.sigma_n = get_or<std::string>(j, "sigma_n", d.sigma_n, w);
    if (j.contains("plus")) d.plus = ball_from(j["plus"], w + ".plus");
    if (j.contains("minus")) d.minus = ball_from(j["minus"], w + ".minus");
    d.branch = get_or<int>(j, "branch", 0, w);
    if (j.contains("sign_flags")) {
        const json& f = j["sign_flags"];
        d.sigma_1_sign = get_or<int>(f, "sigma_1", 1, w + ".sign_flags");
        d.sigma_n_sign = get_or<int>(f, "sigma_n", 1, w + ".sign_flags");
        d.meridian_minus = get_or<bool>(f, "meridian_minus", false, w + ".sign_flags");
        d.literal_dpsi = get_or<bool>(f, "literal_dpsi", false, w + ".sign_flags");
    }
    if (j.contains("caps")) {
        s.caps.R = get_or<int>(j["caps"], "R", s.caps.R, w + ".caps");
        s.caps.S = get_or<int>(j["caps"], "S", s.caps.S, w + ".caps");
        s.caps.max_tail = get_or<double>(j["caps"], "max_tail", s.caps.max_tail, w + ".caps");
    }
    s.annotated = get_or<bool>(j, "annotated", false, w);
    if (j.contains("target_complex")) s.target = complex_from_json(j["target_complex"]);
    if (j.contains("local_system")) s.target_local = local_from(j["local_system"], w + ".local_system");
    return s;
}

json to_json(const cone::BimoduleAtlas& B) {
    json gens = json::array();
    for (const auto& g : B.mixed)
        gens.push_back({{"name", g.name},
                        {"sector", cone::sector_name(B.sector.at(g.name))},
                        {"conjugate", g.conjugate},
                        {"parity", g.parity}});
    json disks = json::array();
    for (const auto& d : B.disks) disks.push_back(to_json(d));
    return {{"minus", to_json(B.minus)},   {"plus", to_json(B.plus)},
            {"generators", gens},          {"disks", disks},
            {"local_system", local_json(B.local_system)}, {"options", to_json(B.options)}};
}

cone::BimoduleAtlas bimodule_from_json(const json& j) {
    const std::string w = "bimodule";
    cone::BimoduleAtlas B;
    B.minus = complex_from_json(field(j, "minus", w));
    B.plus = complex_from_json(field(j, "plus", w));
    const json& gens = field(j, "generators", w);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        std::string wi = w + ".generators[" + std::to_string(i) + "]";
        ainfty::Generator g;
        g.name = get<std::string>(gens[i], "name", wi);
        g.kind = ainfty::GenKind::SelfIntersection;
        g.conjugate = get<std::string>(gens[i], "conjugate", wi);
        g.parity = get<int>(gens[i], "parity", wi) & 1;
        B.sector[g.name] = cone::parse_sector(get<std::string>(gens[i], "sector", wi));
        B.mixed.push_back(g);
    }
    B.disks = disks_from(field(j, "disks", w), w + ".disks");
    B.local_system = local_from(j.contains("local_system") ? j["local_system"] : json(), w + ".local_system");
    B.options = options_from_json(j.contains("options") ? j["options"] : json());
    return B;
}

json to_json(const floer::RankCertificate& c) {
    json piv = json::array();
    for (const auto& p : c.pivots) piv.push_back({{"row", p.row}, {"col", p.col}, {"val", novikov::format_rational(p.val)}});
    return {{"rank", c.rank},
            {"pivots", piv},
            {"margin", novikov::format_ext(c.margin)},
            {"safety_gap", novikov::format_rational(c.safety_gap)},
            {"below_safety", c.below_safety}};
}

json to_json(const floer::HFReport& r) {
    json j = to_json(r.cert);
    j["dim"] = r.dim;
    j["generators"] = r.generators;
    return j;
}

json to_json(const surgery::CurveReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"sigma", row.sigma},
                        {"form", row.form},
                        {"lhs", novikov::to_string(row.lhs)},
                        {"rhs", novikov::to_string(row.rhs)},
                        {"diff", row.diff},
                        {"tail", row.tail},
                        {"pass", row.pass}});
    json c = {{"n", r.constant.n},
              {"removed", ainfty::to_string(r.constant.removed)},
              {"added", ainfty::to_string(r.constant.added)},
              {"match", r.constant.match}};
    if (r.constant.family_sum) {
        c["family_sum"] = novikov::to_string(*r.constant.family_sum);
        c["c_lambda"] = novikov::to_string(*r.constant.c_lambda);
        c["discrepancy"] = novikov::to_string(*r.constant.discrepancy);
    }
    return {{"rows", rows}, {"pass", r.pass}, {"constant_disks", c}};
}

json to_json(const std::vector<surgery::FamilyCheck>& checks) {
    json a = json::array();
    for (const auto& c : checks)
        a.push_back({{"family", c.family},
                     {"output", c.output},
                     {"diff", c.diff},
                     {"tail", c.tail},
                     {"literal_bound", c.literal_bound},
                     {"ok", c.ok}});
    return a;
}

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ParseError, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::ParseError, path + ": " + e.what());
    }
}

void write_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::InvalidInput, "cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

} // namespace lagsurg::io
