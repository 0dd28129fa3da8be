#include "support.hpp"

#include "lagsurg/examples.hpp"
#include "lagsurg/mc.hpp"

using namespace lagsurg;
using namespace lagsurg::mc;
using ainfty::Disk;
using ainfty::GenKind;
using ainfty::Generator;
using lagsurg::novikov::q;
using lagsurg::testing::error_of;
using lagsurg::testing::I;
using lagsurg::testing::mono;
using lagsurg::testing::same;

namespace {

Generator si(const std::string& name, const std::string& conj, int parity) {
    return {name, GenKind::SelfIntersection, 0, conj, parity};
}

Disk disk(std::vector<std::string> in, std::string out, Rational area, int sign = 1) {
    Disk d;
    d.inputs = std::move(in);
    d.output = std::move(out);
    d.area = area;
    d.sign = sign;
    return d;
}

Algebra circle_with(std::vector<Disk> atlas, Rational gap) {
    ainfty::AlgebraOptions opts;
    opts.delta_gap = gap;
    return Algebra(cellular::builders::circle(), {si("x", "xb", 1), si("xb", "x", 0)}, std::move(atlas), {}, opts);
}

Algebra classical_sphere(int n) { return Algebra(cellular::builders::sphere_with_two_balls(n), {}, {}, {}); }

} // namespace

TEST_SUITE("mc") {

TEST_CASE("shifted valuation") {
    auto A = circle_with({}, Rational(1));
    CHECK(shifted_valuation(A, Cochain::single("x", mono(I, Rational(-1, 2))), Rational(3, 5)) ==
          Ext(Rational(1, 10)));
    CHECK(shifted_valuation(A, Cochain::single("sigma_0", q(1)), Rational(3, 5)) == Ext(Rational(1)));
    CHECK(shifted_valuation(A, Cochain(), Rational(3, 5)).is_inf());
}

TEST_CASE("candidate checks") {
    auto A = circle_with({}, Rational(1));
    const Rational d(1, 2);
    CHECK(check_candidate(A, Cochain::single("x", mono(1, Rational(-1, 4))), d).ok);
    CHECK_FALSE(check_candidate(A, Cochain::single("x", mono(1, Rational(-1, 2))), d).ok);
    CHECK_FALSE(check_candidate(A, Cochain::single("sigma_0", Element(1.0)), d).ok);
    CHECK(check_candidate(A, Cochain::single("sigma_0", Element(1.0)), d, Positivity::Relaxed).ok);
    CHECK_FALSE(check_candidate(A, Cochain::single("x", q(1)), Rational(1)).ok);
    CHECK(error_of([&] { require_candidate(A, Cochain::single("xb", q(1)), d); }) == ErrorCode::NotOdd);
    CHECK(error_of([&] { require_candidate(A, Cochain::single("x", q(-1)), d); }) == ErrorCode::NotAdmissible);
}

TEST_CASE("worked example potential") {
    auto ex = examples::immersed_circle();
    auto r = mc_residual(ex.algebra, ex.b0, ex.delta);
    CHECK(same(r, Cochain::single("1w", mono(I, Rational(1, 2)))));
    auto P = potential(ex.algebra, ex.b0, ex.delta);
    CHECK(same(P.W, mono(I, Rational(1, 2))));
    CHECK(P.flat);
    CHECK(same(P.residual, Cochain::single("1w", P.W)));
}

TEST_CASE("zero cochain gives the curvature") {
    auto A = circle_with({disk({}, "x", Rational(1))}, Rational(1, 2));
    CHECK(same(mc_residual(A, Cochain(), Rational(1, 4)), ainfty::m(A, {})));
    auto P = potential(A, Cochain(), Rational(1, 4));
    CHECK(P.W.is_zero());
    CHECK_FALSE(P.flat);
}

TEST_CASE("one triangle residual") {
    auto A = circle_with({disk({"x", "x"}, "xb", Rational(3, 2))}, Rational(1, 2));
    auto c = mono({0.3, -1.1}, Rational(-1, 8));
    auto r = mc_residual(A, Cochain::single("x", c), Rational(1, 4));
    CHECK(same(r, ainfty::m(A, {"x", "x"}).scaled(c * c)));
    // heartsuit [1, 1] = 1 and c(xb, x) = 1
    CHECK(same(r, Cochain::single("x", -(c * c) * q(Rational(3, 2)))));
}

TEST_CASE("gauge step") {
    auto A = classical_sphere(3);
    Cochain b0 = Cochain::single("pt+", q(1)), b1 = Cochain::single("sph+", q(2));
    auto s0 = gauge_step(A, b0, b1, Cochain());
    CHECK(same(s0.value, b0));
    CHECK(same(s0.defect, b1 - b0));
    auto s1 = gauge_step(A, Cochain(), Cochain::single("sph+", q(1)), Cochain::single("ball+", q(1)));
    CHECK(same(s1.value, Cochain::single("sph+", q(1))));
    CHECK(s1.defect.is_zero());
    CHECK(error_of([&] { gauge_step(A, b0, b1, Cochain::single("sph+", q(1))); }) == ErrorCode::InvalidInput);
}

TEST_CASE("gauge integration") {
    auto A = classical_sphere(3);
    GaugeOptions opts;
    Cochain b0 = Cochain::single("pt+", q(1));
    CHECK(same(gauge_integrate(A, b0, Cochain(), opts), b0));
    Cochain h = Cochain::single("ball-", q(Rational(1, 2)));
    CHECK(same(gauge_integrate(A, b0, h, opts), b0 + ainfty::m(A, {"ball-"}).scaled(q(Rational(1, 2)))));
}

TEST_CASE("gauge integration with one product disk") {
    // m_2(xb, x) = q^2 x, so b(x) = b0(x) + q^{5/2} b(x) for h = q^{1/2} xb.
    auto A = circle_with({disk({"xb", "x"}, "xb", Rational(2))}, Rational(1, 2));
    GaugeOptions opts;
    opts.delta = Rational(1, 4);
    auto c0 = mono({0.7, 0.2}, Rational(-1, 8));
    Cochain b0 = Cochain::single("x", c0);
    auto b = gauge_integrate(A, b0, Cochain::single("xb", q(Rational(1, 2))), opts);
    auto expect = novikov::truncate(c0 * (Element(1.0) + q(Rational(5, 2)) + q(Rational(5))), Ext(Rational(6)));
    CHECK(same(b, Cochain::single("x", expect)));
    auto step = gauge_step(A, b0, b, Cochain::single("xb", q(Rational(1, 2))));
    CHECK(same(step.defect, Cochain(), 1e-12));
    CHECK(error_of([&] { gauge_integrate(A, b0, Cochain::single("xb", q(Rational(-1, 2))), opts); }) ==
          ErrorCode::NoProgress);
}

TEST_CASE("gauge away") {
    auto A = classical_sphere(3);
    auto ball = cellular::builders::sphere_ball(true);
    Cochain b0 = Cochain::single("pt+", q(1));
    auto r0 = gauge_away(A, b0, ball);
    CHECK(same(r0.b, b0));
    CHECK(r0.steps == 0);

    Cochain b1 = Cochain::single("sph+", q(1)) + Cochain::single("pt-", q(2));
    auto r1 = gauge_away(A, b1, ball);
    CHECK(r1.b.get("sph+").is_zero());
    CHECK(r1.steps == 1);
    CHECK(same(potential(A, r1.b, Rational(1, 2)).W, potential(A, b1, Rational(1, 2)).W));
    CHECK(potential(A, r1.b, Rational(1, 2)).flat == potential(A, b1, Rational(1, 2)).flat);

    CHECK(error_of([&] { gauge_away(A, b1, cellular::StandardBall{"nope", "sph+", "pt+"}); }) ==
          ErrorCode::MissingBall);
}

TEST_CASE("admissibility") {
    auto ex = examples::immersed_circle();
    CHECK(admissible(ex.algebra, ex.b0, "x", ex.delta, true).ok);
    auto strict = admissible(ex.algebra, ex.b0, "x", ex.delta, false);
    CHECK_FALSE(strict.ok);
    CHECK(strict.failed == "dimension must be at least 2");

    auto syn = examples::dim_synthetic(3);
    CHECK(admissible(syn.algebra, syn.b0, "x", syn.delta).ok);
    CHECK_FALSE(admissible(syn.algebra, syn.b0, "arc", syn.delta).ok);
    auto shallow = syn.b0;
    shallow.set("x", q(1));
    CHECK_FALSE(admissible(syn.algebra, shallow, "x", syn.delta).ok);
    auto resonant = syn.b0;
    resonant.set("x", Element(1.0));
    resonant.set("xb", Element(1.0));
    CHECK_FALSE(admissible(syn.algebra, resonant, "x", syn.delta).ok);
}

}
