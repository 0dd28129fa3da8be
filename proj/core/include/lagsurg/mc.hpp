#pragma once

#include "lagsurg/ainfty.hpp"
#include "lagsurg/cellular.hpp"

#include <string>

namespace lagsurg::mc {

using ainfty::Algebra;
using ainfty::Cochain;
using novikov::Element;
using novikov::Ext;
using novikov::Rational;

enum class Positivity {
    Strict,  // cell and 1g coefficients need positive valuation
    Relaxed, // valuation zero is allowed on cell coefficients
};

// min over the support of val(coefficient) + delta on self-intersection generators.
Ext shifted_valuation(const Algebra& A, const Cochain& b, const Rational& delta);

struct CandidateCheck {
    bool ok = true;
    std::string reason;
};

CandidateCheck check_candidate(const Algebra& A, const Cochain& b, const Rational& delta,
                               Positivity mode = Positivity::Strict);
// Throws NotOdd / NotAdmissible.
void require_candidate(const Algebra& A, const Cochain& b, const Rational& delta,
                       Positivity mode = Positivity::Strict);

Cochain mc_residual(const Algebra& A, const Cochain& b, const Rational& delta,
                    Positivity mode = Positivity::Strict);

struct Potential {
    Element W;
    bool flat = false;
    Cochain residual;
};

Potential potential(const Algebra& A, const Cochain& b, const Rational& delta,
                    Positivity mode = Positivity::Strict);

struct GaugeStep {
    Cochain value;  // b0 + m_1^{b0,b1}(h)
    Cochain defect; // b1 - value
};

GaugeStep gauge_step(const Algebra& A, const Cochain& b0, const Cochain& b1, const Cochain& h);

// Half the smallest per-disk valuation surplus area - s * delta.
Rational default_zeta(const Algebra& A, const Rational& delta);

struct GaugeOptions {
    Rational delta{1, 2};
    std::optional<Rational> zeta;
    int max_iterations = 200;
};

Cochain gauge_integrate(const Algebra& A, const Cochain& b0, const Cochain& h, const GaugeOptions& opts = {});

struct GaugeAwayResult {
    Cochain b;
    int steps = 0;
};

GaugeAwayResult gauge_away(const Algebra& A, const Cochain& b0, const cellular::StandardBall& ball,
                           const GaugeOptions& opts = {});

struct Admissibility {
    bool ok = true;
    std::string failed;
};

// Conditions for surgery at the ordered pair (x, xbar): val b0(x) in (-delta, 0),
// b0(x) b0(xbar) - 1 a unit, and dimension at least two unless example_mode.
Admissibility admissible(const Algebra& A, const Cochain& b0, const std::string& x, const Rational& delta,
                         bool example_mode = false);

} // namespace lagsurg::mc
