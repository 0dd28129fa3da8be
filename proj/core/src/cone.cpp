#include "lagsurg/cone.hpp"

#include "lagsurg/errors.hpp"
#include "lagsurg/mc.hpp"

#include <algorithm>

namespace lagsurg::cone {

Sector parse_sector(const std::string& s) {
    if (s == "minus") return Sector::Minus;
    if (s == "plus") return Sector::Plus;
    if (s == "mp") return Sector::MP;
    if (s == "pm") return Sector::PM;
    fail(ErrorCode::ParseError, "unknown sector '" + s + "'");
}

std::string sector_name(Sector s) {
    switch (s) {
    case Sector::Minus: return "minus";
    case Sector::Plus: return "plus";
    case Sector::MP: return "mp";
    case Sector::PM: return "pm";
    }
    return "";
}

namespace {

// Source and target block of a sector: 0 = minus, 1 = plus.
std::pair<int, int> ends(Sector s) {
    switch (s) {
    case Sector::Minus: return {0, 0};
    case Sector::Plus: return {1, 1};
    case Sector::MP: return {0, 1};
    case Sector::PM: return {1, 0};
    }
    return {0, 0};
}

int heart(const Algebra& A, const std::vector<std::string>& w) { return ainfty::heartsuit_sign(A, w) ? -1 : 1; }

} // namespace

Sector sector_of(const BimoduleAtlas& B, const std::string& name) {
    auto it = B.sector.find(name);
    if (it != B.sector.end()) return it->second;
    if (B.minus.dim_of(name)) return Sector::Minus;
    if (B.plus.dim_of(name)) return Sector::Plus;
    fail(ErrorCode::UnknownGenerator, "generator '" + name + "' has no sector");
}

void check_sectors(const BimoduleAtlas& B) {
    for (const auto& g : B.mixed) {
        auto it = B.sector.find(g.name);
        if (it == B.sector.end() || it->second == Sector::Minus || it->second == Sector::Plus)
            fail(ErrorCode::InvalidInput, "intersection generator '" + g.name + "' needs sector mp or pm");
        auto jt = B.sector.find(g.conjugate);
        if (jt == B.sector.end() || ends(jt->second) != std::make_pair(ends(it->second).second, ends(it->second).first))
            fail(ErrorCode::InvalidInput, "conjugate of '" + g.name + "' is not in the opposite sector");
    }
    for (const auto& d : B.disks) {
        std::optional<int> start, cur;
        for (const auto& g : d.inputs) {
            auto [s, t] = ends(sector_of(B, g));
            if (cur && *cur != s) fail(ErrorCode::InvalidInput, "disk input word is not composable at '" + g + "'");
            if (!start) start = s;
            cur = t;
        }
        // The emitted generator lies in the sector opposite to the output label.
        auto [os, ot] = ends(sector_of(B, d.output));
        std::pair<int, int> emitted{ot, os};
        if (start && emitted != std::make_pair(*start, *cur))
            fail(ErrorCode::InvalidInput, "disk output '" + d.output + "' is in the wrong sector");
        if (!start && emitted.first != emitted.second)
            fail(ErrorCode::InvalidInput, "input-free disk must output into a diagonal sector");
    }
}

Algebra union_algebra(const BimoduleAtlas& B) {
    check_sectors(B);
    if (B.minus.n != B.plus.n) fail(ErrorCode::DimensionMismatch, "L_- and L_+ have different dimensions");
    auto C = cellular::builders::disjoint_union(B.minus, B.plus);
    std::vector<ainfty::Generator> si = B.mixed;
    for (auto& g : si) g.parity ^= 1;
    return Algebra(std::move(C), std::move(si), B.disks, B.local_system, B.options);
}

Cone cone(const BimoduleAtlas& B, const Cochain& b, const Cochain& b_minus, const Cochain& b_plus,
          const Rational& delta) {
    Cone out{union_algebra(B), {}};
    const Algebra& A = out.algebra;
    for (const auto& [g, v] : b.coeffs())
        if (!A.has(g) || sector_of(B, g) != Sector::MP)
            fail(ErrorCode::InvalidInput, "b must be supported on CF(L_-, L_+)");
    for (const auto& [g, v] : b_minus.coeffs())
        if (sector_of(B, g) != Sector::Minus) fail(ErrorCode::InvalidInput, "b_- must live on L_-");
    for (const auto& [g, v] : b_plus.coeffs())
        if (sector_of(B, g) != Sector::Plus) fail(ErrorCode::InvalidInput, "b_+ must live on L_+");
    for (const auto* bb : {&b_minus, &b, &b_plus}) {
        auto chk = mc::check_candidate(A, *bb, delta);
        if (!chk.ok) fail(ErrorCode::NotAdmissible, chk.reason);
    }
    Cochain d = ainfty::m_multi_linear(A, {b_minus, b_plus}, {b});
    if (!d.is_zero()) fail(ErrorCode::NotClosed, "m_1^{b-,b+}(b) = " + ainfty::to_string(d));
    out.b_total = b_minus + b + b_plus;
    return out;
}

Cochain cone_m(const Cone& C, const std::vector<std::string>& word) {
    return ainfty::m_deformed(C.algebra, C.b_total, word);
}

ConeComparison compare_cone_surgery(const BimoduleAtlas& B, const std::string& x, const Rational& A_eps,
                                    const Cochain& b, const Cochain& b_minus, const Cochain& b_plus,
                                    std::size_t max_len) {
    Cone C = cone(B, b, b_minus, b_plus);
    const Algebra& A = C.algebra;
    if (!A.has(x) || !A.is_si(x)) fail(ErrorCode::UnknownGenerator, "'" + x + "' is not an intersection point");
    const std::string xbar = A.gen(x).conjugate;
    for (const auto& [g, v] : b.coeffs())
        if (g != x) fail(ErrorCode::InvalidInput, "b must be a multiple of x");
    for (const auto& d : A.atlas())
        for (const auto& g : d.inputs)
            if (g == xbar) fail(ErrorCode::WrongWayCorner, "disk passes x in the wrong direction");

    Element L = b.get(x) * novikov::q(A_eps);
    std::vector<ainfty::Generator> si;
    for (const auto& g : A.si_generators())
        if (g.name != x && g.name != xbar) si.push_back(g);
    auto local = A.local_system();
    const std::string label = "L";
    local[label] = L;
    Algebra shell(A.complex(), si, {}, local, A.options(), A.unit_white(), A.unit_grey());

    std::vector<Disk> atlas;
    for (const auto& d : A.atlas()) {
        if (d.output == x || d.output == xbar) continue;
        Disk e = d;
        e.inputs.clear();
        int kappa = 0;
        for (const auto& g : d.inputs) {
            if (g == x)
                ++kappa;
            else
                e.inputs.push_back(g);
        }
        if (kappa == 0) {
            atlas.push_back(std::move(e));
            continue;
        }
        e.area = d.area - Rational(kappa) * A_eps;
        if (e.area < Rational(0)) fail(ErrorCode::NotAdmissible, "shifted area is negative");
        e.holonomy.push_back({label, kappa});
        e.sign = d.sign * heart(A, d.inputs) * heart(shell, e.inputs);
        atlas.push_back(std::move(e));
    }
    ConeComparison out;
    out.surgered = Algebra(A.complex(), si, std::move(atlas), local, A.options(), A.unit_white(), A.unit_grey());
    const Cochain beps = b_minus + b_plus;

    std::vector<std::string> gens;
    for (const auto& g : A.basis())
        if (g.name != x && g.name != xbar) gens.push_back(g.name);
    std::vector<std::string> word;
    auto visit = [&](auto&& self, std::size_t len) -> void {
        Cochain lhs = cone_m(C, word);
        lhs.erase(x);
        lhs.erase(xbar);
        Cochain rhs = ainfty::m_deformed(out.surgered, beps, word);
        double worst = 0;
        const auto diff = lhs - rhs;
        for (const auto& [g, v] : diff.coeffs()) worst = std::max(worst, v.max_abs());
        ++out.words;
        if (worst > out.discrepancy) {
            out.discrepancy = worst;
            out.worst_word = word;
        }
        if (len == max_len) return;
        for (const auto& g : gens) {
            word.push_back(g);
            self(self, len + 1);
            word.pop_back();
        }
    };
    visit(visit, 0);
    return out;
}

} // namespace lagsurg::cone
