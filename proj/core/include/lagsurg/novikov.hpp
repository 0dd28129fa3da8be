#pragma once

#include <boost/rational.hpp>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lagsurg::novikov {

using Rational = boost::rational<std::int64_t>;
using Complex = std::complex<double>;

// A rational number or +infinity. Used for valuations and truncation orders.
class Ext {
  public:
    Ext() : inf_(true) {}
    Ext(Rational v) : inf_(false), v_(v) {}
    Ext(std::int64_t v) : inf_(false), v_(v) {}
    static Ext infinity() { return Ext(); }

    bool is_inf() const { return inf_; }
    const Rational& value() const;

    friend bool operator==(const Ext& a, const Ext& b) {
        return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
    }
    friend bool operator!=(const Ext& a, const Ext& b) { return !(a == b); }
    friend bool operator<(const Ext& a, const Ext& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.v_ < b.v_;
    }
    friend bool operator<=(const Ext& a, const Ext& b) { return !(b < a); }
    friend bool operator>(const Ext& a, const Ext& b) { return b < a; }
    friend bool operator>=(const Ext& a, const Ext& b) { return !(a < b); }
    friend Ext operator+(const Ext& a, const Ext& b) {
        if (a.inf_ || b.inf_) return Ext();
        return Ext(a.v_ + b.v_);
    }
    friend Ext operator-(const Ext& a, const Rational& b) {
        if (a.inf_) return Ext();
        return Ext(a.v_ - b);
    }

  private:
    bool inf_;
    Rational v_{0};
};

Ext min(const Ext& a, const Ext& b);

struct Config {
    double zero_tol = 1e-12;
    // Working truncation used when an exact input feeds an infinite series.
    Rational default_trunc{6};
};

Config& config();

struct Term {
    Rational exp;
    Complex coef;
};

// Truncated Novikov series sum_i a_i q^{d_i} + O(q^trunc).
class Element {
  public:
    Element() = default;
    Element(Complex c);
    Element(double c) : Element(Complex(c, 0.0)) {}

    static Element monomial(Complex c, Rational exp, Ext trunc = Ext::infinity());
    static Element zero(Ext trunc = Ext::infinity());
    static Element from_terms(std::vector<Term> terms, Ext trunc);

    const std::vector<Term>& terms() const { return terms_; }
    const Ext& trunc() const { return trunc_; }
    bool is_zero() const { return terms_.empty(); }
    // Coefficient at an exact exponent (0 if absent).
    Complex coef(const Rational& exp) const;
    // Sum of absolute values of stored coefficients.
    double l1_norm() const;
    double max_abs() const;
    Element abs_majorant() const;

  private:
    std::vector<Term> terms_;
    Ext trunc_ = Ext::infinity();
    void normalize();
};

Ext val_q(const Element& a);
Element add(const Element& a, const Element& b);
Element sub(const Element& a, const Element& b);
Element neg(const Element& a);
Element mul(const Element& a, const Element& b);
Element scale(const Element& a, Complex c);
Element shift(const Element& a, const Rational& e);
Element truncate(const Element& a, const Ext& t);
Element pow(const Element& a, unsigned k);

// Inverse via a = c q^v (1 + eps). cap bounds the geometric series when the
// input is exact and eps is nonzero.
Element invert(const Element& a, std::optional<Rational> cap = std::nullopt);
// Log(c) + 2 pi i k + sum (-1)^{k+1} eps^k / k for a = c(1 + eps), val(a) = 0.
Element log_unit(const Element& a, int branch = 0, std::optional<Rational> cap = std::nullopt);
Element exp_series(const Element& a, std::optional<Rational> cap = std::nullopt);

// True when a - b has no term (after tolerance cleaning) below the smaller truncation.
bool equal_below(const Element& a, const Element& b, double tol = -1.0);

inline Element operator+(const Element& a, const Element& b) { return add(a, b); }
inline Element operator-(const Element& a, const Element& b) { return sub(a, b); }
inline Element operator-(const Element& a) { return neg(a); }
inline Element operator*(const Element& a, const Element& b) { return mul(a, b); }
inline Element& operator+=(Element& a, const Element& b) { return a = add(a, b); }
inline Element& operator-=(Element& a, const Element& b) { return a = sub(a, b); }
inline Element& operator*=(Element& a, const Element& b) { return a = mul(a, b); }

// q^e
Element q(Rational e = 1);

Rational parse_rational(const std::string& s);
std::string format_rational(const Rational& r);
std::string format_ext(const Ext& e);
Ext parse_ext(const std::string& s);
std::string to_string(const Element& a);

} // namespace lagsurg::novikov
