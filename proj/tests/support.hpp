#pragma once

#include "lagsurg/ainfty.hpp"
#include "lagsurg/errors.hpp"
#include "lagsurg/novikov.hpp"

#include <doctest.h>

#include <random>

namespace lagsurg::testing {

using novikov::Complex;
using novikov::Element;
using novikov::Rational;

inline Element mono(Complex c, Rational e, novikov::Ext t = novikov::Ext::infinity()) {
    return Element::monomial(c, e, t);
}

inline const Complex I{0.0, 1.0};

// Exact exponents, coefficients within tol.
inline bool same(const Element& a, const Element& b, double tol = 1e-12) { return (a - b).max_abs() <= tol; }

inline bool same(const ainfty::Cochain& a, const ainfty::Cochain& b, double tol = 1e-12) {
    const auto diff = a - b;
    for (const auto& [g, v] : diff.coeffs())
        if (v.max_abs() > tol) return false;
    return true;
}

template <class F>
ErrorCode error_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidInput;
}

// Random element with a few terms of valuation >= vmin and the given truncation.
inline Element random_element(std::mt19937& rng, int terms, int vmin, Rational trunc) {
    std::uniform_int_distribution<int> num(vmin * 4, 4 * 4), count(1, terms);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::vector<novikov::Term> ts;
    int k = count(rng);
    for (int i = 0; i < k; ++i) ts.push_back({Rational(num(rng), 4), {coef(rng), coef(rng)}});
    return Element::from_terms(std::move(ts), novikov::Ext(trunc));
}

} // namespace lagsurg::testing
