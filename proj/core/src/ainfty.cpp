#include "lagsurg/ainfty.hpp"

#include "lagsurg/errors.hpp"

#include <set>
#include <sstream>

namespace lagsurg::ainfty {

using novikov::Complex;

Cochain::Cochain(Map m) {
    for (auto& [k, v] : m)
        if (!v.is_zero()) c_.emplace(k, std::move(v));
}

Cochain Cochain::single(const std::string& name, const Element& coef) {
    Cochain c;
    c.add(name, coef);
    return c;
}

Element Cochain::get(const std::string& name) const {
    auto it = c_.find(name);
    return it == c_.end() ? Element() : it->second;
}

void Cochain::add(const std::string& name, const Element& v) {
    if (v.is_zero()) return;
    auto it = c_.find(name);
    if (it == c_.end()) {
        c_.emplace(name, v);
        return;
    }
    it->second += v;
    if (it->second.is_zero()) c_.erase(it);
}

void Cochain::set(const std::string& name, const Element& v) {
    if (v.is_zero())
        c_.erase(name);
    else
        c_[name] = v;
}

Cochain& Cochain::operator+=(const Cochain& o) {
    for (const auto& [k, v] : o.c_) add(k, v);
    return *this;
}

Cochain& Cochain::operator-=(const Cochain& o) {
    for (const auto& [k, v] : o.c_) add(k, -v);
    return *this;
}

Cochain Cochain::scaled(const Element& s) const {
    Cochain out;
    for (const auto& [k, v] : c_) out.add(k, v * s);
    return out;
}

Cochain Cochain::truncated(const Ext& t) const {
    Cochain out;
    for (const auto& [k, v] : c_) out.add(k, novikov::truncate(v, t));
    return out;
}

std::string to_string(const Cochain& c) {
    if (c.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : c.coeffs()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << novikov::to_string(v) << ")*" << k;
    }
    return os.str();
}

Algebra::Algebra(cellular::CellComplex complex, std::vector<Generator> si_generators, std::vector<Disk> atlas,
                 std::map<std::string, Element> local_system, AlgebraOptions options, std::string unit_white,
                 std::string unit_grey)
    : complex_(std::move(complex)), atlas_(std::move(atlas)), local_system_(std::move(local_system)),
      opts_(options), white_(std::move(unit_white)), grey_(std::move(unit_grey)) {
    auto push = [&](Generator g) {
        if (index_.count(g.name)) fail(ErrorCode::InvalidInput, "duplicate generator '" + g.name + "'");
        index_[g.name] = basis_.size();
        basis_.push_back(std::move(g));
    };
    const int n = complex_.n;
    for (const auto& c : complex_.cells) {
        int codim = n - c.dim;
        push({c.name, GenKind::Cell, c.dim, "", ((codim % 2) + 2) % 2});
    }
    if (!complex_.dual_is_primal())
        for (const auto& c : complex_.dual_cells)
            if (!index_.count(c.name))
                fail(ErrorCode::InvalidInput, "dual cell '" + c.name + "' is not a basis generator");

    std::vector<std::pair<std::string, std::string>> pairs;
    for (auto& g : si_generators) {
        if (g.kind != GenKind::SelfIntersection)
            fail(ErrorCode::InvalidInput, "generator '" + g.name + "' is not a self-intersection point");
        g.parity &= 1;
        push(g);
    }
    for (const auto& g : si_generators) {
        auto it = index_.find(g.conjugate);
        if (it == index_.end() || basis_[it->second].kind != GenKind::SelfIntersection ||
            basis_[it->second].conjugate != g.name)
            fail(ErrorCode::UnknownGenerator, "conjugate of '" + g.name + "' is missing or not mutual");
        if (g.name < g.conjugate) pairs.emplace_back(g.name, g.conjugate);
    }
    push({white_, GenKind::UnitWhite, 0, "", 0});
    push({grey_, GenKind::UnitGrey, 0, "", 1});
    diag_ = cellular::ExtendedDiagonal(complex_, pairs);

    for (const auto& [label, v] : local_system_)
        if (v.is_zero() || novikov::val_q(v) != Ext(0))
            fail(ErrorCode::NotAUnit, "local system value on '" + label + "' is not a unit");

    for (const auto& d : atlas_) {
        for (const auto& s : d.inputs) {
            if (!has(s)) fail(ErrorCode::UnknownGenerator, "disk input '" + s + "' is not a generator");
            auto k = gen(s).kind;
            if (k == GenKind::UnitWhite || k == GenKind::UnitGrey)
                fail(ErrorCode::InvalidInput, "unit generators cannot label disk inputs");
        }
        if (!has(d.output)) fail(ErrorCode::UnknownGenerator, "disk output '" + d.output + "' is not a generator");
        auto k = gen(d.output).kind;
        if (k == GenKind::UnitWhite || k == GenKind::UnitGrey)
            fail(ErrorCode::InvalidInput, "unit generators arise only from the unit relations");
        if (d.sign != 1 && d.sign != -1) fail(ErrorCode::InvalidInput, "disk sign must be +1 or -1");
        if (d.sym <= 0) fail(ErrorCode::InvalidInput, "disk weight must be positive");
        if (d.area < Rational(0)) fail(ErrorCode::InvalidInput, "disk area must be nonnegative");
        for (const auto& [label, k2] : d.holonomy) {
            (void)k2;
            if (!local_system_.count(label))
                fail(ErrorCode::InvalidInput, "holonomy label '" + label + "' has no local-system value");
        }
    }

    for (const auto& g : basis_) {
        auto& row = emit_cache_[g.name];
        if (g.kind == GenKind::SelfIntersection) {
            row.emplace_back(g.conjugate, 1);
        } else if (g.kind == GenKind::Cell) {
            for (const auto& [key, coef] : complex_.diagonal)
                if (key.first == g.name && coef != 0) row.emplace_back(key.second, coef);
        }
    }
}

const Generator& Algebra::gen(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) fail(ErrorCode::UnknownGenerator, "unknown generator '" + name + "'");
    return basis_[it->second];
}

std::vector<Generator> Algebra::si_generators() const {
    std::vector<Generator> out;
    for (const auto& g : basis_)
        if (g.kind == GenKind::SelfIntersection) out.push_back(g);
    return out;
}

Element Algebra::holonomy(const HolonomyWord& w) const {
    Element out(1.0);
    for (const auto& [label, k] : w) {
        auto it = local_system_.find(label);
        if (it == local_system_.end()) fail(ErrorCode::InvalidInput, "no local-system value for '" + label + "'");
        std::optional<Rational> cap;
        if (!opts_.trunc.is_inf()) cap = opts_.trunc.value();
        Element base = k >= 0 ? it->second : novikov::invert(it->second, cap);
        out = out * novikov::pow(base, static_cast<unsigned>(k >= 0 ? k : -k));
    }
    return out;
}

Element Algebra::disk_weight(const Disk& d) const {
    double s = d.sign * (heartsuit_sign(*this, d.inputs) ? -1.0 : 1.0);
    double w = d.sym.convert_to<double>() * s;
    Element out = Element::monomial(Complex(w, 0.0), d.area);
    if (!d.holonomy.empty()) out = out * holonomy(d.holonomy);
    return novikov::truncate(out, opts_.trunc);
}

Cochain Algebra::emit(const std::string& output, const Element& coef) const {
    Cochain out;
    auto it = emit_cache_.find(output);
    if (it == emit_cache_.end()) fail(ErrorCode::UnknownGenerator, "unknown output '" + output + "'");
    for (const auto& [g, c] : it->second) out.add(g, novikov::scale(coef, static_cast<double>(c)));
    return out;
}

int heartsuit_sign(const std::vector<int>& parities) {
    int s = 0;
    for (std::size_t i = 0; i < parities.size(); ++i) s += static_cast<int>(i + 1) * (parities[i] & 1);
    return s & 1;
}

int heartsuit_sign(const Algebra& A, const std::vector<std::string>& word) {
    int s = 0;
    for (std::size_t i = 0; i < word.size(); ++i) s += static_cast<int>(i + 1) * A.parity(word[i]);
    return s & 1;
}

Cochain m_rules(const Algebra& A, const std::vector<std::string>& inputs) {
    Cochain out;
    bool has_white = false;
    for (const auto& s : inputs)
        if (A.gen(s).kind == GenKind::UnitWhite) has_white = true;
    if (has_white) {
        if (inputs.size() != 2) return out;
        const auto& w = A.unit_white();
        if (inputs[0] == w) {
            out.add(inputs[1], Element(1.0));
        } else {
            double s = (A.options().koszul_units && A.parity(inputs[0])) ? -1.0 : 1.0;
            out.add(inputs[0], Element(s));
        }
        return out;
    }
    if (inputs.size() == 1) {
        const auto& g = A.gen(inputs[0]);
        if (g.kind == GenKind::Cell && A.options().classical_boundary) {
            for (const auto& [face, coef] : A.complex().boundary_of(g.name))
                out.add(face, Element(static_cast<double>(coef)));
        } else if (g.kind == GenKind::UnitGrey && A.options().classical_grey) {
            out.add(A.unit_white(), Element(1.0));
            for (const auto& c : A.complex().cells)
                if (c.dim == A.n()) out.add(c.name, Element(-1.0));
        }
    }
    return out;
}

Cochain m(const Algebra& A, const std::vector<std::string>& inputs) {
    for (const auto& s : inputs) (void)A.gen(s);
    Cochain out = m_rules(A, inputs);
    for (const auto& d : A.atlas())
        if (d.inputs == inputs) out += A.emit(d.output, A.disk_weight(d));
    return out.truncated(A.options().trunc);
}

namespace {

void require_odd(const Algebra& A, const Cochain& b) {
    for (const auto& [k, v] : b.coeffs())
        if (A.parity(k) != 1) fail(ErrorCode::NotOdd, "inserted cochain has even generator '" + k + "'");
}

struct Matcher {
    const Algebra& A;
    const std::vector<Cochain>& bs;
    const std::vector<std::string>& args;
    const std::vector<std::string>* word = nullptr;

    // Sum over all ways to split word[pos..] as the pattern b_slot* a_{slot+1} b_{slot+1}* ... b_d*.
    // min_val tracks the accumulated insertion valuation for the convergence certificate.
    void run(std::size_t pos, std::size_t slot, const Element& coef, Ext acc_val, bool inserted,
             const Rational& area, Element& total) const {
        const std::size_t d = args.size();
        if (pos == word->size()) {
            if (slot != d) return;
            if (inserted && !(Ext(area) + acc_val > Ext(Rational(0))) && !acc_val.is_inf())
                fail(ErrorCode::NonConvergent, "insertion does not raise the valuation");
            total += coef;
            return;
        }
        const std::string& g = (*word)[pos];
        if (slot < d && args[slot] == g) run(pos + 1, slot + 1, coef, acc_val, inserted, area, total);
        const auto& cmap = bs[slot].coeffs();
        auto it = cmap.find(g);
        if (it != cmap.end()) {
            Ext v = novikov::val_q(it->second);
            Ext nv = acc_val.is_inf() ? v : acc_val + v;
            run(pos + 1, slot, coef * it->second, nv, true, area, total);
        }
    }
};

// All words obtained by inserting exactly `extra` generators from the b's into args.
void words_with_insertions(const std::vector<Cochain>& bs, const std::vector<std::string>& args, std::size_t extra,
                           std::size_t slot, std::vector<std::string>& cur, const Element& coef,
                           const std::function<void(const std::vector<std::string>&, const Element&)>& emit) {
    const std::size_t d = args.size();
    if (slot > d) {
        if (extra == 0) emit(cur, coef);
        return;
    }
    // Choose how many insertions go into slot `slot`, then continue.
    std::function<void(std::size_t, const Element&)> fill = [&](std::size_t left, const Element& c) {
        // Option: stop inserting into this slot.
        if (slot < d) {
            cur.push_back(args[slot]);
            words_with_insertions(bs, args, left, slot + 1, cur, c, emit);
            cur.pop_back();
        } else if (left == 0) {
            emit(cur, c);
        }
        if (left == 0) return;
        for (const auto& [g, v] : bs[slot].coeffs()) {
            cur.push_back(g);
            fill(left - 1, c * v);
            cur.pop_back();
        }
    };
    fill(extra, coef);
}

} // namespace

Cochain m_multi(const Algebra& A, const std::vector<Cochain>& bs, const std::vector<std::string>& args) {
    if (bs.size() != args.size() + 1) fail(ErrorCode::InvalidInput, "m_multi needs d+1 inserted cochains");
    for (const auto& s : args) (void)A.gen(s);
    for (const auto& b : bs) require_odd(A, b);

    Cochain out;
    Matcher M{A, bs, args};
    for (const auto& d : A.atlas()) {
        if (d.inputs.size() < args.size()) continue;
        M.word = &d.inputs;
        Element total;
        M.run(0, 0, Element(1.0), Ext::infinity(), false, d.area, total);
        if (total.is_zero()) continue;
        out += A.emit(d.output, novikov::truncate(total * A.disk_weight(d), A.options().trunc));
    }
    for (std::size_t len = 1; len <= 2; ++len) {
        if (len < args.size()) continue;
        std::vector<std::string> cur;
        words_with_insertions(bs, args, len - args.size(), 0, cur, Element(1.0),
                              [&](const std::vector<std::string>& w, const Element& c) {
                                  out += m_rules(A, w).scaled(c);
                              });
    }
    return out.truncated(A.options().trunc);
}

Cochain m_multi_linear(const Algebra& A, const std::vector<Cochain>& bs, const std::vector<Cochain>& args) {
    Cochain out;
    std::vector<std::string> word(args.size());
    std::function<void(std::size_t, const Element&)> rec = [&](std::size_t i, const Element& c) {
        if (i == args.size()) {
            out += m_multi(A, bs, word).scaled(c);
            return;
        }
        for (const auto& [g, v] : args[i].coeffs()) {
            word[i] = g;
            rec(i + 1, c * v);
        }
    };
    rec(0, Element(1.0));
    return out.truncated(A.options().trunc);
}

Cochain m_deformed(const Algebra& A, const Cochain& b, const std::vector<std::string>& args) {
    return m_multi(A, std::vector<Cochain>(args.size() + 1, b), args);
}

Element correlator(const Algebra& A, const std::string& sigma, const Cochain& b, bool skip_constant) {
    require_odd(A, b);
    std::vector<Cochain> bs{b};
    std::vector<std::string> none;
    Matcher M{A, bs, none};
    Element out;
    for (const auto& d : A.atlas()) {
        if (d.output != sigma || (skip_constant && d.constant_on_handle)) continue;
        M.word = &d.inputs;
        Element total;
        M.run(0, 0, Element(1.0), Ext::infinity(), false, d.area, total);
        if (!total.is_zero()) out += total * A.disk_weight(d);
    }
    return novikov::truncate(out, A.options().trunc);
}

Cochain ainfty_residual(const Algebra& A, const CompositionFn& mfn, const std::vector<std::string>& inputs) {
    const std::size_t d = inputs.size();
    Cochain out;
    for (std::size_t d1 = 0; d1 <= d; ++d1) {
        int pre = static_cast<int>(d1);
        for (std::size_t i = 0; i < d1; ++i) pre += A.parity(inputs[i]);
        double sign = (pre & 1) ? -1.0 : 1.0;
        for (std::size_t d2 = 0; d1 + d2 <= d; ++d2) {
            std::vector<std::string> inner(inputs.begin() + d1, inputs.begin() + d1 + d2);
            Cochain mid = mfn(inner);
            for (const auto& [g, c] : mid.coeffs()) {
                std::vector<std::string> outer(inputs.begin(), inputs.begin() + d1);
                outer.push_back(g);
                outer.insert(outer.end(), inputs.begin() + d1 + d2, inputs.end());
                out += mfn(outer).scaled(novikov::scale(c, sign));
            }
        }
    }
    return out.truncated(A.options().trunc);
}

Cochain ainfty_residual(const Algebra& A, const std::vector<std::string>& inputs) {
    return ainfty_residual(A, [&](const std::vector<std::string>& w) { return m(A, w); }, inputs);
}

SignCongruence gluing_sign(int d, int n, int m, const std::vector<int>& degrees) {
    if (n < 0 || m < 0 || n + m > d || static_cast<int>(degrees.size()) != d)
        fail(ErrorCode::InvalidInput, "gluing sign needs 0 <= n, m and n + m <= d = #degrees");
    auto deg = [&](int k) { return degrees[static_cast<std::size_t>(k - 1)] & 1; };
    int alpha = m;
    for (int k = n + 1; k <= n + m; ++k) alpha += deg(k);

    long s = static_cast<long>(m - 1) * (n - 1);
    long b = static_cast<long>(n + 1) * alpha;
    for (int k = 1; k <= n; ++k) b += k * deg(k);
    for (int k = n + m + 1; k <= d; ++k) b += (k - m + 1) * deg(k);
    for (int k = n + 1; k <= n + m; ++k) b += (k - n) * deg(k);
    long tail = alpha;
    for (int i = std::max(n, 1); i <= d; ++i) tail += deg(i);
    long c = static_cast<long>(d - m + 1) * m + static_cast<long>(m) * tail;
    long e = 0;
    for (int k = 1; k <= n; ++k) e += deg(k) + 1;

    long target = 0;
    for (int k = 1; k <= d; ++k) target += (k + 1) * deg(k);
    auto mod2 = [](long v) { return static_cast<int>(((v % 2) + 2) % 2); };
    return {mod2(s + b + c + e), mod2(target)};
}

bool verify_gluing_sign_congruence(int d, int n, int m, const std::vector<int>& degrees) {
    return gluing_sign(d, n, m, degrees).ok();
}

Cochain geometric_unit(const Algebra& A) {
    Cochain out;
    for (const auto& c : A.complex().cells)
        if (c.dim == A.n()) out.add(c.name, Element(1.0));
    return out;
}

bool is_odd(const Algebra& A, const Cochain& c) {
    for (const auto& [k, v] : c.coeffs())
        if (A.parity(k) != 1) return false;
    return true;
}

std::vector<AtlasViolation> validate_atlas(const Algebra& A) {
    std::vector<AtlasViolation> out;
    const Rational gap = A.options().delta_gap;
    for (std::size_t i = 0; i < A.atlas().size(); ++i) {
        const Disk& d = A.atlas()[i];
        if (d.inputs.empty() && d.area <= Rational(0))
            out.push_back({i, "curvature_gap", "input-free disk with output '" + d.output + "' has area 0"});
        if (d.constant_on_handle) continue;
        int s = A.is_si(d.output) ? 1 : 0;
        for (const auto& g : d.inputs) s += A.is_si(g) ? 1 : 0;
        if (d.area < gap * s)
            out.push_back({i, "corner_gap",
                           "disk with output '" + d.output + "' has area " + novikov::format_rational(d.area) +
                               " below " + std::to_string(s) + " * delta_gap"});
    }
    return out;
}

} // namespace lagsurg::ainfty
