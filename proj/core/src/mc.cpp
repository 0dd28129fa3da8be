#include "lagsurg/mc.hpp"

#include "lagsurg/errors.hpp"

#include <algorithm>

namespace lagsurg::mc {

using ainfty::GenKind;

Ext shifted_valuation(const Algebra& A, const Cochain& b, const Rational& delta) {
    Ext out = Ext::infinity();
    for (const auto& [g, v] : b.coeffs()) {
        Ext val = novikov::val_q(v);
        if (A.is_si(g)) val = val + Ext(delta);
        out = novikov::min(out, val);
    }
    return out;
}

CandidateCheck check_candidate(const Algebra& A, const Cochain& b, const Rational& delta, Positivity mode) {
    if (!(delta > Rational(0))) return {false, "delta must be positive"};
    if (!(delta < A.options().delta_gap)) return {false, "delta must be below the corner gap"};
    for (const auto& [g, v] : b.coeffs()) {
        const auto& gen = A.gen(g);
        if (gen.parity != 1) return {false, "generator '" + g + "' is even"};
        Ext val = novikov::val_q(v);
        if (gen.kind == GenKind::SelfIntersection) {
            if (!(val > Ext(-delta))) return {false, "self-intersection coefficient on '" + g + "' has val <= -delta"};
        } else if (gen.kind == GenKind::UnitWhite) {
            return {false, "the strict unit cannot appear in b"};
        } else {
            bool ok = mode == Positivity::Strict ? val > Ext(0) : val >= Ext(0);
            if (!ok) return {false, "cell coefficient on '" + g + "' has nonpositive valuation"};
        }
    }
    return {};
}

void require_candidate(const Algebra& A, const Cochain& b, const Rational& delta, Positivity mode) {
    for (const auto& [g, v] : b.coeffs())
        if (A.parity(g) != 1) fail(ErrorCode::NotOdd, "b has even generator '" + g + "'");
    auto chk = check_candidate(A, b, delta, mode);
    if (!chk.ok) fail(ErrorCode::NotAdmissible, chk.reason);
}

Cochain mc_residual(const Algebra& A, const Cochain& b, const Rational& delta, Positivity mode) {
    require_candidate(A, b, delta, mode);
    return ainfty::m_deformed(A, b, {});
}

Potential potential(const Algebra& A, const Cochain& b, const Rational& delta, Positivity mode) {
    Potential p;
    p.residual = mc_residual(A, b, delta, mode);
    p.W = p.residual.get(A.unit_white());
    Cochain rest = p.residual;
    rest.erase(A.unit_white());
    p.flat = rest.is_zero();
    return p;
}

GaugeStep gauge_step(const Algebra& A, const Cochain& b0, const Cochain& b1, const Cochain& h) {
    for (const auto& [g, v] : h.coeffs())
        if (A.parity(g) != 0) fail(ErrorCode::InvalidInput, "gauge parameter has odd generator '" + g + "'");
    GaugeStep s;
    s.value = b0 + ainfty::m_multi_linear(A, {b0, b1}, {h});
    s.defect = b1 - s.value;
    return s;
}

Rational default_zeta(const Algebra& A, const Rational& delta) {
    std::optional<Rational> best;
    for (const auto& d : A.atlas()) {
        int s = A.is_si(d.output) ? 1 : 0;
        for (const auto& g : d.inputs) s += A.is_si(g) ? 1 : 0;
        Rational surplus = d.area - delta * s;
        if (surplus > Rational(0) && (!best || surplus < *best)) best = surplus;
    }
    return best ? *best / 2 : Rational(1, 2);
}

Cochain gauge_integrate(const Algebra& A, const Cochain& b0, const Cochain& h, const GaugeOptions& opts) {
    if (h.is_zero()) return b0;
    Ext vh = shifted_valuation(A, h, opts.delta);
    Rational zeta = opts.zeta.value_or(default_zeta(A, opts.delta));
    if (!opts.zeta && !vh.is_inf()) zeta = std::min(zeta, vh.value() / 2);
    if (!(Ext(zeta) < vh) || zeta <= Rational(0)) fail(ErrorCode::NoProgress, "gauge parameter valuation must exceed zeta > 0");

    Cochain b = b0;
    std::optional<Ext> last;
    for (int k = 0; k < opts.max_iterations; ++k) {
        Cochain next = b0 + ainfty::m_multi_linear(A, {b0, b}, {h});
        Cochain diff = next - b;
        if (diff.is_zero()) return next;
        Ext v = shifted_valuation(A, diff, opts.delta);
        if (last && v < *last + Ext(zeta))
            fail(ErrorCode::NoProgress, "fixed-point iteration did not gain zeta in valuation");
        last = v;
        b = std::move(next);
    }
    fail(ErrorCode::NoProgress, "fixed-point iteration did not converge below the truncation");
}

GaugeAwayResult gauge_away(const Algebra& A, const Cochain& b0, const cellular::StandardBall& ball,
                           const GaugeOptions& opts) {
    if (!A.has(ball.sphere) || !A.has(ball.top)) fail(ErrorCode::MissingBall, "ball cells are not generators");
    Element lead = ainfty::m(A, {ball.top}).get(ball.sphere);
    GaugeAwayResult out{b0, 0};
    Ext last = Ext(Rational(-1000000));
    for (int k = 0; k < opts.max_iterations; ++k) {
        Element c = out.b.get(ball.sphere);
        if (c.is_zero()) return out;
        if (lead.is_zero()) fail(ErrorCode::NoProgress, "m_1 of the ball has no component on its sphere");
        Ext v = novikov::val_q(c);
        if (!(v > last)) fail(ErrorCode::NoProgress, "sphere coefficient valuation did not increase");
        last = v;
        std::optional<Rational> cap;
        if (!A.options().trunc.is_inf()) cap = A.options().trunc.value();
        Cochain h = Cochain::single(ball.top, -(c * novikov::invert(lead, cap)));
        out.b = gauge_integrate(A, out.b, h, opts);
        ++out.steps;
    }
    fail(ErrorCode::NoProgress, "gauge_away did not terminate");
}

Admissibility admissible(const Algebra& A, const Cochain& b0, const std::string& x, const Rational& delta,
                         bool example_mode) {
    if (!A.has(x) || !A.is_si(x)) return {false, "'" + x + "' is not a self-intersection generator"};
    if (!example_mode && A.n() < 2) return {false, "dimension must be at least 2"};
    Element bx = b0.get(x);
    if (bx.is_zero()) return {false, "b0(x) vanishes"};
    Ext v = novikov::val_q(bx);
    if (!(v > Ext(-delta) && v < Ext(0))) return {false, "val_q(b0(x)) must lie in (-delta, 0)"};
    Element z = bx * b0.get(A.gen(x).conjugate) - Element(1.0);
    if (z.is_zero() || novikov::val_q(z) != Ext(0)) return {false, "b0(x) b0(xbar) - 1 must be a unit"};
    return {};
}

} // namespace lagsurg::mc
