#include "support.hpp"

#include "lagsurg/examples.hpp"
#include "lagsurg/floer.hpp"
#include "lagsurg/mc.hpp"
#include "lagsurg/surgery.hpp"

using namespace lagsurg;
using lagsurg::novikov::Element;
using lagsurg::novikov::Ext;
using lagsurg::novikov::Rational;
using lagsurg::novikov::q;
using lagsurg::testing::random_element;
using lagsurg::testing::same;

namespace {

constexpr int kTrials = 200;
const Rational kTrunc(5);

Element nonzero(std::mt19937& rng) {
    for (;;) {
        auto e = random_element(rng, 4, -2, kTrunc);
        if (!e.is_zero()) return e;
    }
}

// A unit of valuation zero with a random tail.
Element unit(std::mt19937& rng) {
    std::uniform_real_distribution<double> coef(0.3, 2.0), phase(-3.0, 3.0);
    auto tail = random_element(rng, 3, 1, kTrunc);
    return Element::monomial(std::polar(coef(rng), phase(rng)), Rational(0), Ext(kTrunc)) + tail;
}

std::vector<cellular::CellComplex> complexes() {
    std::vector<cellular::CellComplex> out{cellular::builders::circle(),
                                           examples::immersed_circle().target};
    for (int n = 2; n <= 5; ++n) {
        auto C = cellular::builders::sphere_with_two_balls(n);
        out.push_back(C);
        out.push_back(cellular::surger_cells(C, cellular::builders::sphere_ball(true),
                                             cellular::builders::sphere_ball(false)));
    }
    return out;
}

} // namespace

TEST_SUITE("properties") {

TEST_CASE("field axioms") {
    std::mt19937 rng(1);
    for (int t = 0; t < kTrials; ++t) {
        auto a = nonzero(rng), b = random_element(rng, 4, -2, kTrunc), c = random_element(rng, 4, -2, kTrunc);
        auto inv = novikov::invert(a);
        // Coefficients of the inverse series grow geometrically; scale by the condition number.
        double tol = 1e-12 * std::max(1.0, a.max_abs() * inv.max_abs());
        INFO(novikov::to_string(a) << " tol " << tol);
        CHECK(novikov::equal_below(a * inv, Element(1.0), tol));
        CHECK(same((a * b) * c, a * (b * c), 1e-9));
        CHECK(same(a * (b + c), a * b + a * c, 1e-9));
        CHECK(same(a * b, b * a, 1e-9));
        CHECK(same(a + b - b, a, 1e-12));
    }
}

TEST_CASE("valuation inequalities") {
    std::mt19937 rng(2);
    for (int t = 0; t < kTrials; ++t) {
        auto a = nonzero(rng), b = nonzero(rng);
        auto s = a + b;
        if (!s.is_zero()) CHECK(novikov::min(novikov::val_q(a), novikov::val_q(b)) <= novikov::val_q(s));
        auto p = a * b;
        auto vp = novikov::val_q(a) + novikov::val_q(b);
        if (vp < p.trunc()) CHECK(novikov::val_q(p) == vp);
    }
}

TEST_CASE("exponential inverts the logarithm on units") {
    std::mt19937 rng(3);
    for (int t = 0; t < kTrials; ++t) {
        auto u = unit(rng);
        CHECK(novikov::equal_below(novikov::exp_series(novikov::log_unit(u)), u, 1e-9));
    }
}

TEST_CASE("cellular identities on bundled and surgered complexes") {
    for (const auto& C : complexes()) {
        INFO("n = " << C.n << ", cells = " << C.cells.size());
        CHECK(cellular::validate_complex(C).empty());
    }
}

TEST_CASE("geometric unit is a cycle") {
    for (const auto& C : complexes()) {
        ainfty::Algebra A(C, {}, {}, {});
        auto u = ainfty::geometric_unit(A);
        ainfty::Cochain d;
        for (const auto& [g, v] : u.coeffs()) d += ainfty::m(A, {g}).scaled(v);
        INFO("n = " << C.n << ", cells = " << C.cells.size());
        CHECK(d.is_zero());
    }
}

TEST_CASE("flat deformations square to zero") {
    std::mt19937 rng(4);
    for (int t = 0; t < 20; ++t) {
        auto ex = examples::random_gauge_example(rng);
        const auto& A = ex.algebra;
        auto P = mc::potential(A, ex.b0, ex.delta);
        REQUIRE(P.flat);
        auto m0 = mc::mc_residual(A, ex.b0, ex.delta);
        CHECK(ainfty::m_multi_linear(A, {ex.b0, ex.b0}, {m0}).is_zero());
        auto D = floer::floer_differential(A, ex.b0);
        CHECK(floer::multiply(D, D).is_zero());
    }
}

TEST_CASE("gauge equivalent pairs share the potential") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> coef(-1.5, 1.5);
    std::uniform_int_distribution<int> num(1, 6);
    for (int t = 0; t < 20; ++t) {
        auto ex = examples::random_gauge_example(rng);
        const auto& A = ex.algebra;
        ainfty::Cochain h;
        h.add("e0", Element::monomial({coef(rng), coef(rng)}, Rational(num(rng), 4)));
        h.add("e1", Element::monomial({coef(rng), coef(rng)}, Rational(num(rng), 4)));
        h.add("xb", Element::monomial({coef(rng), coef(rng)}, Rational(num(rng), 4) - ex.delta / 2));
        mc::GaugeOptions opts;
        opts.delta = ex.delta;
        auto b1 = mc::gauge_integrate(A, ex.b0, h, opts);
        CHECK_FALSE(same(b1, ex.b0));
        CHECK(mc::gauge_step(A, ex.b0, b1, h).defect.is_zero());
        CHECK(mc::check_candidate(A, b1, ex.delta).ok);
        auto W0 = mc::potential(A, ex.b0, ex.delta), W1 = mc::potential(A, b1, ex.delta);
        CHECK(same(W0.W, W1.W, 1e-9));
        CHECK(W0.flat == W1.flat);
    }
}

TEST_CASE("curve identity on random atlases") {
    std::mt19937 rng(6);
    for (int t = 0; t < 40; ++t) {
        int n = 3 + t % 2;
        auto ex = examples::random_surgery_example(rng, n);
        auto rep = surgery::verify_curve_identity(ex.algebra, ex.data, ex.b0, surgery::Caps{}, 1e-9, ex.delta);
        INFO("trial " << t << ", n = " << n);
        CHECK(rep.pass);
    }
}

TEST_CASE("strict unit on random words") {
    std::mt19937 rng(7);
    auto ex = examples::immersed_circle();
    const auto& A = ex.algebra;
    std::vector<std::string> gens;
    for (const auto& g : A.basis())
        if (g.name != "1w") gens.push_back(g.name);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1), len(0, 3);
    for (int t = 0; t < kTrials; ++t) {
        std::vector<std::string> w;
        std::size_t k = len(rng);
        for (std::size_t i = 0; i < k; ++i) w.push_back(gens[pick(rng)]);
        std::size_t at = std::uniform_int_distribution<std::size_t>(0, w.size())(rng);
        w.insert(w.begin() + static_cast<std::ptrdiff_t>(at), "1w");
        auto out = ainfty::m(A, w);
        if (w.size() != 2) CHECK(out.is_zero());
        else CHECK(out.size() == 1);
    }
}

}
