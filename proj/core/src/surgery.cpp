#include "lagsurg/surgery.hpp"

#include "lagsurg/errors.hpp"
#include "lagsurg/mc.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace lagsurg::surgery {

using ainfty::HolonomyWord;
using ainfty::Weight;

namespace {

int heart(const Algebra& A, const std::vector<std::string>& w) { return ainfty::heartsuit_sign(A, w) ? -1 : 1; }

std::optional<Rational> cap_of(const Algebra& A) {
    if (A.options().trunc.is_inf()) return std::nullopt;
    return A.options().trunc.value();
}

Element inv(const Algebra& A, const Element& e) { return novikov::invert(e, cap_of(A)); }

void require_handle_free(const Algebra& A0, const Cochain& b0, const SurgeryData& S) {
    for (const auto* name : {&S.plus.top, &S.minus.top, &S.plus.sphere, &S.minus.sphere})
        if (!b0.get(*name).is_zero())
            fail(ErrorCode::NotAdmissible, "b0 must vanish on the handle cell '" + *name + "'");
    (void)A0;
}

Cochain strip_handle(const Cochain& b0, const SurgeryData& S) {
    Cochain b = b0;
    b.erase(S.x);
    b.erase(S.xbar);
    return b;
}

} // namespace

HandleCoefficients handle_coefficients(const Algebra& A0, const Cochain& b0, const SurgeryData& S) {
    if (!A0.has(S.x) || !A0.is_si(S.x)) fail(ErrorCode::UnknownGenerator, "'" + S.x + "' is not a self-intersection");
    if (A0.gen(S.x).conjugate != S.xbar) fail(ErrorCode::InvalidInput, "'" + S.xbar + "' is not the conjugate of x");
    HandleCoefficients h;
    h.bx = b0.get(S.x);
    h.bxbar = b0.get(S.xbar);
    h.z = h.bx * h.bxbar;
    h.unit = h.bx * novikov::q(S.A_eps);
    if (h.unit.is_zero() || novikov::val_q(h.unit) != Ext(0))
        fail(ErrorCode::NotAUnit, "b0(x) q^A(eps) is not a unit");
    h.c_mu = novikov::log_unit(h.unit, S.branch, cap_of(A0));
    if (A0.n() == 2) {
        h.c_lambda = novikov::log_unit(h.z - Element(1.0), S.branch, cap_of(A0));
    } else {
        h.c_lambda = h.z;
    }
    return h;
}

cellular::CellComplex surgered_complex(const Algebra& A0, const SurgeryData& S) {
    cellular::SurgerOptions o;
    o.sigma_1 = S.lambda;
    o.sigma_n = S.sigma_n;
    o.sigma_1_sign = S.sigma_1_sign;
    o.sigma_n_sign = S.sigma_n_sign;
    return cellular::surger_cells(A0.complex(), S.plus, S.minus, o);
}

Algebra surgered_shell(const Algebra& A0, const SurgeryData& S, std::vector<Disk> atlas,
                       std::map<std::string, Element> extra_local) {
    std::vector<ainfty::Generator> si;
    for (const auto& g : A0.si_generators())
        if (g.name != S.x && g.name != S.xbar) si.push_back(g);
    auto local = A0.local_system();
    for (auto& [k, v] : extra_local) local[k] = v;
    return Algebra(surgered_complex(A0, S), std::move(si), std::move(atlas), std::move(local), A0.options(),
                   A0.unit_white(), A0.unit_grey());
}

std::vector<std::string> surgered_basis(const Algebra& A0, const SurgeryData& S) {
    std::vector<std::string> out;
    const Algebra shell = surgered_shell(A0, S, {});
    for (const auto& g : shell.basis()) out.push_back(g.name);
    return out;
}

Cochain psi(const Algebra& A0, const Cochain& b0, const SurgeryData& S, const Rational& delta) {
    auto adm = mc::admissible(A0, b0, S.x, delta);
    if (!adm.ok) fail(ErrorCode::NotAdmissible, adm.failed);
    require_handle_free(A0, b0, S);
    auto h = handle_coefficients(A0, b0, S);
    Cochain b = strip_handle(b0, S);
    b.add(S.mu(), h.c_mu);
    b.add(S.lambda, h.c_lambda);
    return b;
}

LocalVariant psi_local_system_variant(const Algebra& A0, const Cochain& b0, const SurgeryData& S,
                                      const Rational& delta, LocalMode mode, const Cochain* kappa) {
    if (mode == LocalMode::Mshift) {
        if (A0.n() != 2) fail(ErrorCode::InvalidInput, "the meridian-holonomy variant is for n = 2");
        if (!kappa) fail(ErrorCode::MissingOneChain, "the meridian-holonomy variant needs a one-chain kappa");
        Element M = b0.get(S.x) * b0.get(S.xbar) - Element(1.0);
        if (M.is_zero() || novikov::val_q(M) != Ext(0))
            fail(ErrorCode::NotAUnit, "b0(x) b0(xbar) - 1 is not a unit");
    }
    auto adm = mc::admissible(A0, b0, S.x, delta);
    if (!adm.ok) fail(ErrorCode::NotAdmissible, adm.failed);
    require_handle_free(A0, b0, S);
    LocalVariant out;
    out.b = strip_handle(b0, S);
    if (mode == LocalMode::Lshift) {
        auto h = handle_coefficients(A0, b0, S);
        out.b.add(S.lambda, h.c_lambda);
        out.local_system[S.longitude_label] = h.unit;
        return out;
    }
    out.local_system[S.meridian_label] = b0.get(S.x) * b0.get(S.xbar) - Element(1.0);
    return out;
}

Cochain dpsi_apply(const Algebra& A0, const Cochain& b0, const SurgeryData& S, const std::string& sigma) {
    if (!A0.has(sigma)) fail(ErrorCode::UnknownGenerator, "unknown generator '" + sigma + "'");
    Cochain out;
    if (sigma == S.plus.top || sigma == S.minus.top) return out;
    Element bx = b0.get(S.x), bxbar = b0.get(S.xbar);
    if (bx.is_zero()) fail(ErrorCode::NotAUnit, "b0(x) vanishes");
    Element zm1 = bx * bxbar - Element(1.0);
    if (sigma == S.x) {
        Element unit = S.literal_dpsi ? bx * novikov::q(S.A_eps) : bx;
        out.add(S.mu(), inv(A0, unit));
        out.add(S.lambda, A0.n() == 2 ? bxbar * inv(A0, zm1) : bxbar);
    } else if (sigma == S.xbar) {
        out.add(S.lambda, A0.n() == 2 ? bx * inv(A0, zm1) : bx);
    } else {
        out.add(sigma, Element(1.0));
    }
    return out;
}

Matrix dpsi(const Algebra& A0, const Cochain& b0, const SurgeryData& S) {
    std::vector<std::string> cols;
    for (const auto& g : A0.basis()) cols.push_back(g.name);
    Matrix M(surgered_basis(A0, S), cols);
    std::map<std::string, std::size_t> row;
    for (std::size_t i = 0; i < M.rows.size(); ++i) row[M.rows[i]] = i;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const Cochain img = dpsi_apply(A0, b0, S, cols[j]);
        for (const auto& [g, v] : img.coeffs()) M.a[row.at(g)][j] = v;
    }
    return M;
}

namespace {

struct Option {
    std::vector<std::string> seg;
    Weight w{1};
    int sign = 1;
    int hol = 0; // exponent of the longitude label
};

Weight inv_factorial(int r) {
    boost::multiprecision::cpp_int f = 1;
    for (int k = 2; k <= r; ++k) f *= k;
    return Weight(1) / Weight(f);
}

std::vector<std::string> repeat(const std::string& s, int k) { return std::vector<std::string>(k, s); }

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// Meridian block mu^r with weight (+-1)^r / r!; in Lshift mode a holonomy exponent instead.
std::vector<Option> meridian_block(const std::string& mu, int R, bool alternate, Expansion mode) {
    std::vector<Option> out;
    if (mode == Expansion::Lshift) {
        out.push_back({{}, 1, 1, alternate ? -1 : 1});
        return out;
    }
    for (int r = 0; r <= R; ++r)
        out.push_back({repeat(mu, r), inv_factorial(r), alternate && (r % 2) ? -1 : 1, 0});
    return out;
}

// lambda^s / s! followed by a meridian block.
std::vector<Option> sheet_b(const std::string& lambda, const std::string& mu, int R, int Scap, Expansion mode) {
    std::vector<Option> out;
    for (int s = 0; s <= Scap; ++s)
        for (const auto& m : meridian_block(mu, R, true, mode))
            out.push_back({concat(repeat(lambda, s), m.seg), inv_factorial(s) * m.w, m.sign, m.hol});
    return out;
}

std::vector<Option> corner_options(Corner c, int n, const SurgeryData& S, const Caps& caps, Expansion mode) {
    const std::string& mu = S.mu();
    std::vector<Option> out;
    auto with_prefix = [&](const std::vector<std::string>& pre, std::vector<Option> blk, int sign) {
        for (auto& o : blk) {
            o.seg = concat(pre, o.seg);
            o.sign *= sign;
            out.push_back(std::move(o));
        }
    };
    switch (c) {
    case Corner::XIn:
    case Corner::XOut:
        with_prefix({}, meridian_block(mu, caps.R, false, mode), 1);
        break;
    case Corner::XbarIn:
    case Corner::XbarOutMu: {
        int sign = c == Corner::XbarOutMu ? -1 : 1;
        if (n > 2) {
            with_prefix({S.lambda}, meridian_block(mu, caps.R, true, mode), sign);
        } else {
            with_prefix({}, meridian_block(mu, caps.R, true, mode), sign);
            with_prefix({}, sheet_b(S.lambda, mu, caps.R, caps.S, mode), sign);
        }
        break;
    }
    case Corner::XbarOutLambda:
        if (n > 2)
            with_prefix({}, meridian_block(mu, caps.R, true, mode), 1);
        else
            with_prefix({}, sheet_b(S.lambda, mu, caps.R, caps.S, mode), 1);
        break;
    }
    return out;
}

bool is_x_corner(Corner c) { return c == Corner::XIn || c == Corner::XOut; }

double partial_exp(double a, int R) {
    double term = 1.0, sum = 1.0;
    for (int r = 1; r <= R; ++r) {
        term *= a / r;
        sum += term;
    }
    return sum;
}

struct Factors {
    Element e_plus, e_minus, e_lambda;
};

Factors closed_factors(const Algebra& A0, const HandleCoefficients& h, Expansion mode, int n) {
    Factors f;
    if (mode == Expansion::Lshift) {
        f.e_plus = h.unit;
        f.e_minus = inv(A0, h.unit);
    } else {
        f.e_plus = novikov::exp_series(h.c_mu, cap_of(A0));
        f.e_minus = novikov::exp_series(-h.c_mu, cap_of(A0));
    }
    if (n == 2) f.e_lambda = novikov::exp_series(h.c_lambda, cap_of(A0));
    return f;
}

Element corner_factor(Corner c, int n, const HandleCoefficients& h, const Factors& f) {
    switch (c) {
    case Corner::XIn:
    case Corner::XOut:
        return f.e_plus;
    case Corner::XbarIn:
        return n > 2 ? h.c_lambda * f.e_minus : f.e_minus * (Element(1.0) + f.e_lambda);
    case Corner::XbarOutLambda:
        return n > 2 ? f.e_minus : f.e_lambda * f.e_minus;
    case Corner::XbarOutMu:
        return n > 2 ? -(h.c_lambda * f.e_minus) : -(f.e_minus * (Element(1.0) + f.e_lambda));
    }
    return Element();
}

// (full majorant, capped majorant) for one corner.
std::pair<double, double> corner_majorant(Corner c, int n, const HandleCoefficients& h, const Caps& caps,
                                          Expansion mode, const Algebra& A0) {
    double a = h.c_mu.l1_norm(), l = h.c_lambda.l1_norm();
    double mp, sp, mm, sm;
    if (mode == Expansion::Lshift) {
        mp = sp = h.unit.l1_norm();
        mm = sm = inv(A0, h.unit).l1_norm();
    } else {
        mp = mm = std::exp(a);
        sp = sm = partial_exp(a, caps.R);
    }
    switch (c) {
    case Corner::XIn:
    case Corner::XOut:
        return {mp, sp};
    case Corner::XbarIn:
    case Corner::XbarOutMu:
        if (n > 2) return {l * mm, l * sm};
        return {mm * (1.0 + std::exp(l)), sm * (1.0 + partial_exp(l, caps.S))};
    case Corner::XbarOutLambda:
        if (n > 2) return {mm, sm};
        return {mm * std::exp(l), sm * partial_exp(l, caps.S)};
    }
    return {0.0, 0.0};
}

Cochain beps_for(const Cochain& b0, const SurgeryData& S, const HandleCoefficients& h,
                 Expansion mode) {
    Cochain b = strip_handle(b0, S);
    if (mode == Expansion::Resummed) b.add(S.mu(), h.c_mu);
    b.add(S.lambda, h.c_lambda);
    return b;
}

Element plain_product(const Cochain& b, const std::vector<std::string>& words) {
    Element p(1.0);
    for (const auto& g : words) {
        p = p * b.get(g);
        if (p.is_zero()) break;
    }
    return p;
}

double plain_norm(const Cochain& b, const std::vector<std::string>& words) {
    double p = 1.0;
    for (const auto& g : words) p *= b.get(g).l1_norm();
    return p;
}

double family_tail(const Family& f, int n, const HandleCoefficients& h, const Cochain& beps, const Caps& caps,
                   Expansion mode, const Algebra& A0) {
    if (f.corners.empty()) return 0.0;
    double full = 1.0, capped = 1.0;
    for (auto c : f.corners) {
        auto [m, s] = corner_majorant(c, n, h, caps, mode, A0);
        full *= m;
        capped *= s;
    }
    return f.base_weight.l1_norm() * plain_norm(beps, f.plain_inputs) * std::max(0.0, full - capped);
}

double literal_tail(const HandleCoefficients& h, int R) {
    double a = h.c_mu.l1_norm();
    if (a == 0.0) return 0.0;
    return std::exp((R + 1) * std::log(a) - std::lgamma(R + 2.0));
}

} // namespace

TransformResult transform_atlas(const Algebra& A0, const SurgeryData& S, const std::optional<Cochain>& b0,
                                const Caps& caps, Expansion mode) {
    const int n = A0.n();
    if (n < 2) fail(ErrorCode::DimensionTooLow, "transform_atlas needs n >= 2; use the annotated transform");
    if (caps.R < 0 || caps.S < 0) fail(ErrorCode::InvalidInput, "caps must be nonnegative");
    TransformResult T;
    T.expansion = mode;
    if (b0) T.coeffs = handle_coefficients(A0, *b0, S);
    if (mode == Expansion::Lshift && !b0) fail(ErrorCode::InvalidInput, "the Lshift expansion needs b0");

    std::map<std::string, Element> extra;
    if (mode == Expansion::Lshift) extra[S.longitude_label] = T.coeffs->unit;
    const Algebra shell = surgered_shell(A0, S, {}, extra);
    const std::set<std::string> removed{S.plus.top, S.minus.top};

    std::vector<Disk> atlas;
    for (std::size_t k = 0; k < A0.atlas().size(); ++k) {
        const Disk& d = A0.atlas()[k];
        if (d.constant_on_handle) continue;
        if (removed.count(d.output)) fail(ErrorCode::InvalidInput, "disk output on a removed ball cell");
        for (const auto& g : d.inputs)
            if (removed.count(g)) fail(ErrorCode::InvalidInput, "disk input on a removed ball cell");

        std::vector<std::pair<std::string, std::optional<Corner>>> outputs;
        if (d.output == S.x)
            outputs.push_back({S.mu(), Corner::XOut});
        else if (d.output == S.xbar) {
            outputs.push_back({S.lambda, Corner::XbarOutLambda});
            outputs.push_back({S.mu(), Corner::XbarOutMu});
        } else {
            outputs.push_back({d.output, std::nullopt});
        }

        const int heart0 = heart(A0, d.inputs);
        for (const auto& [out_label, out_corner] : outputs) {
            Family fam;
            fam.source = k;
            fam.output = out_label;
            int kappa = 0, kappa_bar = 0;
            for (const auto& g : d.inputs) {
                if (g == S.x) {
                    fam.corners.push_back(Corner::XIn);
                    ++kappa;
                } else if (g == S.xbar) {
                    fam.corners.push_back(Corner::XbarIn);
                    ++kappa_bar;
                } else {
                    fam.plain_inputs.push_back(g);
                }
            }
            if (out_corner) {
                fam.corners.push_back(*out_corner);
                if (is_x_corner(*out_corner))
                    ++kappa;
                else
                    ++kappa_bar;
            }
            fam.area = d.area - Rational(kappa - kappa_bar) * S.A_eps;
            if (fam.area < Rational(0))
                fail(ErrorCode::NotAdmissible, "shifted disk area is negative; A(eps) exceeds the corner gap");
            fam.base_weight = novikov::scale(A0.holonomy(d.holonomy) * novikov::q(fam.area),
                                             heart0 * d.sign * d.sym.convert_to<double>());

            std::vector<std::vector<Option>> opts;
            for (auto c : fam.corners) opts.push_back(corner_options(c, n, S, caps, mode));

            std::vector<std::size_t> pick(opts.size(), 0);
            for (;;) {
                Disk e;
                e.area = fam.area;
                e.sym = d.sym;
                e.holonomy = d.holonomy;
                e.annotations = d.annotations;
                e.output = out_label;
                int sign = d.sign, hol = 0;
                std::size_t ci = 0;
                for (const auto& g : d.inputs) {
                    if (g == S.x || g == S.xbar) {
                        const Option& o = opts[ci][pick[ci]];
                        e.inputs.insert(e.inputs.end(), o.seg.begin(), o.seg.end());
                        e.sym *= o.w;
                        sign *= o.sign;
                        hol += o.hol;
                        ++ci;
                    } else {
                        e.inputs.push_back(g);
                    }
                }
                if (out_corner) {
                    const Option& o = opts[ci][pick[ci]];
                    e.inputs.insert(e.inputs.end(), o.seg.begin(), o.seg.end());
                    e.sym *= o.w;
                    sign *= o.sign;
                    hol += o.hol;
                }
                if (hol != 0) e.holonomy.push_back({S.longitude_label, hol});
                e.sign = sign * heart0 * heart(shell, e.inputs);
                fam.members.push_back(atlas.size());
                atlas.push_back(std::move(e));

                std::size_t i = 0;
                while (i < pick.size() && ++pick[i] == opts[i].size()) pick[i++] = 0;
                if (i == pick.size()) break;
            }
            T.families.push_back(std::move(fam));
        }
    }

    T.algebra = surgered_shell(A0, S, std::move(atlas), extra);
    if (b0) {
        Cochain beps = beps_for(*b0, S, *T.coeffs, mode);
        for (const auto& f : T.families) {
            double tail = family_tail(f, n, *T.coeffs, beps, caps, mode, A0);
            if (tail > caps.max_tail) {
                std::ostringstream os;
                os << "expansion tail " << tail << " exceeds " << caps.max_tail << "; raise the caps";
                fail(ErrorCode::CapTooSmall, os.str());
            }
        }
    }
    return T;
}

Cochain psi_annotated(const Algebra& A0, const Cochain& b0, const SurgeryData& S) {
    if (!A0.has(S.x) || !A0.is_si(S.x)) fail(ErrorCode::UnknownGenerator, "'" + S.x + "' is not a self-intersection");
    return strip_handle(b0, S);
}

namespace {

HolonomyWord parse_holonomy(const std::string& s) {
    HolonomyWord w;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) fail(ErrorCode::ParseError, "holonomy annotation '" + item + "' needs label:exp");
        try {
            w.push_back({item.substr(0, colon), std::stoi(item.substr(colon + 1))});
        } catch (const std::exception&) {
            fail(ErrorCode::ParseError, "bad holonomy exponent in '" + item + "'");
        }
    }
    return w;
}

} // namespace

Algebra transform_annotated(const Algebra& A0, const SurgeryData& S, const cellular::CellComplex& target,
                            const std::map<std::string, Element>& local_system) {
    static const std::set<std::string> keys{"drop", "output", "holonomy", "area_shift", "drop_x_inputs"};
    auto is_handle = [&](const std::string& g) { return g == S.x || g == S.xbar; };
    std::vector<ainfty::Generator> si;
    for (const auto& g : A0.si_generators())
        if (!is_handle(g.name)) si.push_back(g);
    Algebra shell(target, si, {}, local_system, A0.options(), A0.unit_white(), A0.unit_grey());

    std::vector<Disk> atlas;
    for (const auto& d : A0.atlas()) {
        bool touches = is_handle(d.output);
        for (const auto& g : d.inputs) touches = touches || is_handle(g);
        bool annotated = false;
        for (const auto& [k, v] : d.annotations) annotated = annotated || keys.count(k);
        if (touches && !annotated) fail(ErrorCode::UnannotatedCorner, "disk with a corner at x has no annotation");
        auto get = [&](const std::string& k) -> std::optional<std::string> {
            auto it = d.annotations.find(k);
            if (it == d.annotations.end()) return std::nullopt;
            return it->second;
        };
        if (get("drop") == std::optional<std::string>("true")) continue;
        Disk e = d;
        if (auto o = get("output"))
            e.output = *o;
        else if (is_handle(d.output))
            fail(ErrorCode::UnannotatedCorner, "disk with output at x needs an output annotation");
        if (get("drop_x_inputs") == std::optional<std::string>("true")) {
            e.inputs.clear();
            for (const auto& g : d.inputs)
                if (!is_handle(g)) e.inputs.push_back(g);
        } else {
            for (const auto& g : d.inputs)
                if (is_handle(g)) fail(ErrorCode::UnannotatedCorner, "disk input at x needs drop_x_inputs");
        }
        if (auto h = get("holonomy"))
            for (auto& t : parse_holonomy(*h)) e.holonomy.push_back(t);
        if (auto a = get("area_shift")) e.area = e.area + novikov::parse_rational(*a) * S.A_eps;
        e.sign = d.sign * heart(A0, d.inputs) * heart(shell, e.inputs);
        atlas.push_back(std::move(e));
    }
    return Algebra(target, std::move(si), std::move(atlas), local_system, A0.options(), A0.unit_white(),
                   A0.unit_grey());
}

std::vector<FamilyCheck> resummation_check(const TransformResult& T, const Algebra& A0, const Cochain& b0,
                                           const SurgeryData& S, const Caps& caps, double tol) {
    const int n = A0.n();
    const HandleCoefficients h = T.coeffs ? *T.coeffs : handle_coefficients(A0, b0, S);
    const Cochain beps = beps_for(b0, S, h, T.expansion);
    const Factors fac = closed_factors(A0, h, T.expansion, n);
    const Ext t = A0.options().trunc;
    std::vector<FamilyCheck> out;
    for (std::size_t i = 0; i < T.families.size(); ++i) {
        const Family& f = T.families[i];
        if (f.corners.empty()) continue;
        FamilyCheck c;
        c.family = i;
        c.output = f.output;
        for (auto m : f.members) {
            const Disk& d = T.algebra.atlas()[m];
            c.path_a += T.algebra.disk_weight(d) * plain_product(beps, d.inputs);
        }
        c.path_a = novikov::truncate(c.path_a, t);
        Element b = f.base_weight * plain_product(beps, f.plain_inputs);
        for (auto cr : f.corners) b = b * corner_factor(cr, n, h, fac);
        c.path_b = novikov::truncate(b, t);
        c.diff = (c.path_a - c.path_b).max_abs();
        c.tail = family_tail(f, n, h, beps, caps, T.expansion, A0);
        c.literal_bound = literal_tail(h, caps.R);
        c.ok = c.diff <= tol * std::max(1.0, c.path_b.max_abs()) + c.tail;
        out.push_back(std::move(c));
    }
    return out;
}

ConstantCheck constant_disk_check(const Algebra& A0, const Algebra& Aeps, const SurgeryData& S, const Cochain& b0,
                                  const Cochain& beps) {
    ConstantCheck c;
    c.n = A0.n();
    for (const auto& d : A0.atlas()) {
        if (!d.constant_on_handle) continue;
        Element coef = A0.disk_weight(d) * plain_product(b0, d.inputs);
        if (!coef.is_zero()) c.removed += A0.emit(d.output, coef);
    }
    Element bl = beps.get(S.lambda);
    if (!bl.is_zero()) c.added = ainfty::m_rules(Aeps, {S.lambda}).scaled(bl);
    Cochain diff = c.removed - c.added;
    c.match = true;
    for (const auto& [g, v] : diff.coeffs()) c.match = c.match && v.max_abs() <= 1e-9;
    if (c.n == 2) {
        Element z = b0.get(S.x) * b0.get(S.xbar);
        Element one_minus = Element(1.0) - z;
        if (!one_minus.is_zero() && novikov::val_q(one_minus) == Ext(0)) {
            c.family_sum = -novikov::log_unit(one_minus, 0, cap_of(A0));
            c.c_lambda = novikov::log_unit(z - Element(1.0), S.branch, cap_of(A0));
            c.discrepancy = *c.family_sum - *c.c_lambda;
        }
    }
    return c;
}

namespace {

Element row_tail(const TransformResult& T, const std::vector<double>& tails, const std::string& out) {
    double t = 0;
    for (std::size_t i = 0; i < T.families.size(); ++i)
        if (T.families[i].output == out) t += tails[i];
    return Element(t);
}

CurveRow make_row(std::string sigma, std::string form, Element lhs, Element rhs, double tail, double tol) {
    CurveRow r;
    r.sigma = std::move(sigma);
    r.form = std::move(form);
    r.lhs = std::move(lhs);
    r.rhs = std::move(rhs);
    r.diff = (r.lhs - r.rhs).max_abs();
    r.tail = tail;
    r.pass = r.diff <= tol * std::max(1.0, r.rhs.max_abs()) + tail;
    return r;
}

} // namespace

CurveReport verify_curve_identity(const Algebra& A0, const TransformResult& T, const SurgeryData& S,
                                  const Cochain& b0, const Caps& caps, double tol) {
    const int n = A0.n();
    const HandleCoefficients h = T.coeffs ? *T.coeffs : handle_coefficients(A0, b0, S);
    const Cochain beps = beps_for(b0, S, h, T.expansion);
    const Algebra& Ae = T.algebra;

    std::vector<double> tails;
    for (const auto& f : T.families) tails.push_back(family_tail(f, n, h, beps, caps, T.expansion, A0));

    std::map<std::string, Element> Fe;
    auto F_eps = [&](const std::string& rho) -> const Element& {
        auto it = Fe.find(rho);
        if (it == Fe.end()) it = Fe.emplace(rho, ainfty::correlator(Ae, rho, beps, true)).first;
        return it->second;
    };
    auto F0 = [&](const std::string& s) { return ainfty::correlator(A0, s, b0, true); };

    CurveReport rep;
    for (const auto& g : A0.basis()) {
        const std::string& s = g.name;
        if (g.kind == ainfty::GenKind::UnitWhite || g.kind == ainfty::GenKind::UnitGrey) continue;
        if (s == S.plus.top || s == S.minus.top || s == S.mu()) continue;
        Cochain img = dpsi_apply(A0, b0, S, s);
        Element lhs;
        double tail = 0;
        for (const auto& [rho, coef] : img.coeffs()) {
            lhs += coef * F_eps(rho);
            tail += coef.l1_norm() * row_tail(T, tails, rho).max_abs();
        }
        rep.rows.push_back(make_row(s, "dpsi", novikov::truncate(lhs, A0.options().trunc), F0(s), tail, tol));
    }
    Element rhs_mu = F0(S.mu()) + h.bx * F0(S.x) - h.bxbar * F0(S.xbar);
    rep.rows.push_back(make_row(S.mu(), "meridian", F_eps(S.mu()), novikov::truncate(rhs_mu, A0.options().trunc),
                                row_tail(T, tails, S.mu()).max_abs(), tol));
    Element rhs_l = inv(A0, h.bx) * F0(S.xbar);
    if (n == 2) rhs_l = rhs_l * (h.z - Element(1.0));
    rep.rows.push_back(make_row(S.lambda, "longitude", F_eps(S.lambda),
                                novikov::truncate(rhs_l, A0.options().trunc),
                                row_tail(T, tails, S.lambda).max_abs(), tol));
    for (const auto& r : rep.rows) rep.pass = rep.pass && r.pass;
    rep.constant = constant_disk_check(A0, Ae, S, b0, beps);
    return rep;
}

CurveReport verify_curve_identity(const Algebra& A0, const SurgeryData& S, const Cochain& b0, const Caps& caps,
                                  double tol, const Rational& delta) {
    auto adm = mc::admissible(A0, b0, S.x, delta);
    if (!adm.ok) fail(ErrorCode::NotAdmissible, adm.failed);
    require_handle_free(A0, b0, S);
    auto T = transform_atlas(A0, S, b0, caps, Expansion::Resummed);
    return verify_curve_identity(A0, T, S, b0, caps, tol);
}

Matrix correlator_jacobian(const Algebra& A, const Cochain& b, const std::vector<std::string>& outputs,
                           const std::vector<std::string>& inputs) {
    Matrix K(outputs, inputs);
    std::map<std::string, std::size_t> ri, ci;
    for (std::size_t i = 0; i < outputs.size(); ++i) ri[outputs[i]] = i;
    for (std::size_t j = 0; j < inputs.size(); ++j) ci[inputs[j]] = j;
    for (const auto& d : A.atlas()) {
        if (d.constant_on_handle) continue;
        auto r = ri.find(d.output);
        if (r == ri.end()) continue;
        Element w = A.disk_weight(d);
        for (std::size_t p = 0; p < d.inputs.size(); ++p) {
            auto c = ci.find(d.inputs[p]);
            if (c == ci.end()) continue;
            Element prod = w;
            for (std::size_t j = 0; j < d.inputs.size() && !prod.is_zero(); ++j)
                if (j != p) prod = prod * b.get(d.inputs[j]);
            if (!prod.is_zero()) K.a[r->second][c->second] += prod;
        }
    }
    for (auto& row : K.a)
        for (auto& e : row) e = novikov::truncate(e, A.options().trunc);
    return K;
}

Matrix dpsi_correction(const Algebra& A0, const Algebra& Aeps, const Cochain& b0, const Cochain& beps,
                       const SurgeryData& S, const std::vector<std::string>& generators) {
    Matrix E(generators, generators);
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < generators.size(); ++i) idx[generators[i]] = i;
    if (!idx.count(S.x) || !idx.count(S.xbar)) return E;
    const std::size_t ix = idx[S.x], ib = idx[S.xbar];
    Element bx = b0.get(S.x), bb = b0.get(S.xbar);
    Element Fmu = ainfty::correlator(Aeps, S.mu(), beps, true);
    Element Fl = ainfty::correlator(Aeps, S.lambda, beps, true);
    Element ibx = inv(A0, bx);
    E.a[ix][ix] = -(Fmu * ibx * ibx);
    if (A0.n() > 2) {
        E.a[ix][ib] = Fl;
        E.a[ib][ix] = Fl;
    } else {
        Element izm = inv(A0, bx * bb - Element(1.0));
        Element izm2 = izm * izm;
        E.a[ix][ix] -= bb * bb * Fl * izm2;
        E.a[ix][ib] = -(Fl * izm2);
        E.a[ib][ix] = -(Fl * izm2);
        E.a[ib][ib] = -(bx * bx * Fl * izm2);
    }
    for (auto& row : E.a)
        for (auto& e : row) e = novikov::truncate(e, A0.options().trunc);
    return E;
}

} // namespace lagsurg::surgery
