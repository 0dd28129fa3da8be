#include "lagsurg/novikov.hpp"

#include "lagsurg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

namespace lagsurg::novikov {

const Rational& Ext::value() const {
    if (inf_) fail(ErrorCode::InvalidInput, "value() of +inf");
    return v_;
}

Ext min(const Ext& a, const Ext& b) { return b < a ? b : a; }

Config& config() {
    static Config cfg;
    return cfg;
}

namespace {

bool negligible(Complex c) { return std::abs(c) <= config().zero_tol; }

// Valuation of a, or its truncation when a is a truncated zero.
Ext effective_val(const Element& a) { return a.is_zero() ? a.trunc() : Ext(a.terms().front().exp); }

Element from_map(const std::map<Rational, Complex>& m, const Ext& t) {
    std::vector<Term> terms;
    terms.reserve(m.size());
    for (const auto& [e, c] : m) terms.push_back({e, c});
    return Element::from_terms(std::move(terms), t);
}

} // namespace

Element::Element(Complex c) {
    if (!negligible(c)) terms_.push_back({Rational(0), c});
}

Element Element::monomial(Complex c, Rational exp, Ext trunc) {
    return from_terms({{exp, c}}, trunc);
}

Element Element::zero(Ext trunc) { return from_terms({}, trunc); }

Element Element::from_terms(std::vector<Term> terms, Ext trunc) {
    Element out;
    out.terms_ = std::move(terms);
    out.trunc_ = trunc;
    out.normalize();
    return out;
}

void Element::normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.exp < b.exp; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (!merged.empty() && merged.back().exp == t.exp)
            merged.back().coef += t.coef;
        else
            merged.push_back(t);
    }
    terms_.clear();
    for (const auto& t : merged)
        if (!negligible(t.coef) && Ext(t.exp) < trunc_) terms_.push_back(t);
}

Complex Element::coef(const Rational& exp) const {
    for (const auto& t : terms_)
        if (t.exp == exp) return t.coef;
    return {0.0, 0.0};
}

double Element::l1_norm() const {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.coef);
    return s;
}

double Element::max_abs() const {
    double s = 0.0;
    for (const auto& t : terms_) s = std::max(s, std::abs(t.coef));
    return s;
}

Element Element::abs_majorant() const {
    std::vector<Term> terms;
    for (const auto& t : terms_) terms.push_back({t.exp, Complex(std::abs(t.coef), 0.0)});
    return from_terms(std::move(terms), trunc_);
}

Ext val_q(const Element& a) {
    if (a.is_zero()) return Ext::infinity();
    return Ext(a.terms().front().exp);
}

Element add(const Element& a, const Element& b) {
    std::vector<Term> terms = a.terms();
    terms.insert(terms.end(), b.terms().begin(), b.terms().end());
    return Element::from_terms(std::move(terms), min(a.trunc(), b.trunc()));
}

Element neg(const Element& a) { return scale(a, Complex(-1.0, 0.0)); }

Element sub(const Element& a, const Element& b) { return add(a, neg(b)); }

Element scale(const Element& a, Complex c) {
    std::vector<Term> terms = a.terms();
    for (auto& t : terms) t.coef *= c;
    return Element::from_terms(std::move(terms), a.trunc());
}

Element shift(const Element& a, const Rational& e) {
    std::vector<Term> terms = a.terms();
    for (auto& t : terms) t.exp += e;
    Ext t = a.trunc().is_inf() ? Ext::infinity() : Ext(a.trunc().value() + e);
    return Element::from_terms(std::move(terms), t);
}

Element mul(const Element& a, const Element& b) {
    Ext t = min(a.trunc() + effective_val(b), b.trunc() + effective_val(a));
    std::map<Rational, Complex> acc;
    for (const auto& x : a.terms())
        for (const auto& y : b.terms()) {
            Rational e = x.exp + y.exp;
            if (Ext(e) < t) acc[e] += x.coef * y.coef;
        }
    return from_map(acc, t);
}

Element truncate(const Element& a, const Ext& t) {
    return Element::from_terms(a.terms(), min(a.trunc(), t));
}

Element pow(const Element& a, unsigned k) {
    Element out(1.0);
    for (unsigned i = 0; i < k; ++i) out = mul(out, a);
    return out;
}

Element q(Rational e) { return Element::monomial(1.0, e); }

namespace {

// Splits a nonzero a as c q^v (1 + eps); returns (c, v, eps).
struct UnitSplit {
    Complex c;
    Rational v;
    Element eps;
};

UnitSplit split_unit(const Element& a) {
    const Term& lead = a.terms().front();
    Element u = scale(shift(a, -lead.exp), 1.0 / lead.coef);
    return {lead.coef, lead.exp, sub(u, Element(1.0))};
}

// Series sum_k w(k) eps^k where val(eps) > 0, evaluated to truncation t.
template <class Weight>
Element series(const Element& eps, const Ext& t, Weight w, unsigned first) {
    Element out = Element::zero(t);
    if (eps.is_zero()) {
        if (first == 0) out = truncate(Element(w(0)), t);
        return out;
    }
    Rational ve = val_q(eps).value();
    Element power = first == 0 ? Element(1.0) : pow(eps, first);
    for (unsigned k = first;; ++k) {
        if (!(Ext(ve * static_cast<std::int64_t>(k)) < t)) break;
        out = add(out, truncate(scale(power, w(k)), t));
        power = truncate(mul(power, eps), t);
    }
    return truncate(out, t);
}

} // namespace

Element invert(const Element& a, std::optional<Rational> cap) {
    if (a.is_zero()) fail(ErrorCode::ZeroDivision, "invert of zero");
    auto [c, v, eps] = split_unit(a);
    // Relative precision of the unit part.
    Ext rel = a.trunc() - v;
    if (rel.is_inf() && !eps.is_zero()) rel = Ext(cap.value_or(config().default_trunc) + v);
    Element inv_u = series(eps, rel, [](unsigned k) { return Complex(k % 2 == 0 ? 1.0 : -1.0, 0.0); }, 0);
    return scale(shift(inv_u, -v), 1.0 / c);
}

Element log_unit(const Element& a, int branch, std::optional<Rational> cap) {
    if (a.is_zero()) fail(ErrorCode::NotAUnit, "log of zero");
    if (val_q(a) != Ext(0)) fail(ErrorCode::NotAUnit, "log_unit needs valuation 0, got " + format_ext(val_q(a)));
    auto [c, v, eps] = split_unit(a);
    Ext t = a.trunc();
    if (t.is_inf() && !eps.is_zero()) t = Ext(cap.value_or(config().default_trunc));
    Element tail = series(
        eps, t,
        [](unsigned k) { return Complex((k % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(k), 0.0); }, 1);
    Complex lead = std::log(c) + Complex(0.0, 2.0 * std::numbers::pi * branch);
    return add(truncate(Element(lead), t), tail);
}

Element exp_series(const Element& a, std::optional<Rational> cap) {
    Ext v = val_q(a);
    if (v < Ext(0)) fail(ErrorCode::NegativeValuation, "exp_series needs valuation >= 0");
    Complex a0 = a.coef(Rational(0));
    Element rest = sub(a, truncate(Element(a0), a.trunc()));
    Ext t = a.trunc();
    if (t.is_inf() && !rest.is_zero()) t = Ext(cap.value_or(config().default_trunc));
    std::vector<double> inv_fact{1.0};
    Element s = series(
        rest, t,
        [&](unsigned k) {
            while (inv_fact.size() <= k) inv_fact.push_back(inv_fact.back() / static_cast<double>(inv_fact.size()));
            return Complex(inv_fact[k], 0.0);
        },
        0);
    return scale(s, std::exp(a0));
}

bool equal_below(const Element& a, const Element& b, double tol) {
    if (tol < 0) tol = config().zero_tol;
    Element d = sub(a, b);
    for (const auto& t : d.terms())
        if (std::abs(t.coef) > tol) return false;
    return true;
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            std::int64_t n = std::stoll(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return Rational(n);
        }
        std::string ns = s.substr(0, slash), ds = s.substr(slash + 1);
        std::int64_t n = std::stoll(ns, &used);
        if (used != ns.size()) throw std::invalid_argument(s);
        std::int64_t d = std::stoll(ds, &used);
        if (used != ds.size() || d == 0) throw std::invalid_argument(s);
        return Rational(n, d);
    } catch (const std::logic_error&) {
        fail(ErrorCode::ParseError, "bad rational '" + s + "'");
    }
}

std::string format_rational(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string format_ext(const Ext& e) { return e.is_inf() ? "inf" : format_rational(e.value()); }

Ext parse_ext(const std::string& s) {
    if (s == "inf" || s == "+inf") return Ext::infinity();
    return Ext(parse_rational(s));
}

namespace {

std::string format_coef(Complex c) {
    std::ostringstream os;
    os << std::setprecision(12);
    double re = std::abs(c.real()) <= config().zero_tol ? 0.0 : c.real();
    double im = std::abs(c.imag()) <= config().zero_tol ? 0.0 : c.imag();
    if (im == 0.0)
        os << re;
    else if (re == 0.0)
        os << im << "i";
    else
        os << "(" << re << (im < 0 ? "-" : "+") << std::abs(im) << "i)";
    return os.str();
}

} // namespace

std::string to_string(const Element& a) {
    std::ostringstream os;
    bool first = true;
    for (const auto& t : a.terms()) {
        if (!first) os << " + ";
        first = false;
        os << format_coef(t.coef);
        if (t.exp != Rational(0)) os << " q^" << format_rational(t.exp);
    }
    if (first) os << "0";
    if (!a.trunc().is_inf()) os << " + O(q^" << format_rational(a.trunc().value()) << ")";
    return os.str();
}

} // namespace lagsurg::novikov
