#include "support.hpp"

#include "lagsurg/examples.hpp"
#include "lagsurg/floer.hpp"

using namespace lagsurg;
using namespace lagsurg::floer;
using lagsurg::novikov::q;
using lagsurg::testing::error_of;
using lagsurg::testing::same;

namespace {

Algebra classical(const cellular::CellComplex& C) { return Algebra(C, {}, {}, {}); }

cellular::CellComplex surgered_sphere(int n) {
    return cellular::surger_cells(cellular::builders::sphere_with_two_balls(n), cellular::builders::sphere_ball(true),
                                  cellular::builders::sphere_ball(false));
}

std::size_t index_of(const std::vector<std::string>& v, const std::string& s) {
    return static_cast<std::size_t>(std::find(v.begin(), v.end(), s) - v.begin());
}

Element zero_at(const Rational& t) { return novikov::truncate(Element(), Ext(t)); }

Matrix square(std::vector<std::string> basis) { return Matrix(basis, basis); }

} // namespace

TEST_SUITE("floer") {

TEST_CASE("matrix algebra") {
    Matrix x({"a", "b"}, {"c"});
    x.at(0, 0) = q(1);
    x.at(1, 0) = Element(2.0);
    Matrix y({"c"}, {"d"});
    y.at(0, 0) = q(2);
    auto xy = multiply(x, y);
    CHECK(same(xy.at(0, 0), q(3)));
    CHECK(same(xy.at(1, 0), novikov::scale(q(2), 2.0)));
    auto t = transpose(x);
    CHECK(t.rows == std::vector<std::string>{"c"});
    CHECK(same(t.at(0, 1), Element(2.0)));
    CHECK(subtract(x, x).is_zero());
    CHECK(error_of([&] { multiply(x, x); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("classical differentials") {
    auto A = classical(cellular::builders::circle());
    auto D = floer_differential(A, Cochain());
    // Only m_1(1g) = 1w - sigma_1 survives on the circle.
    for (std::size_t i = 0; i < D.rows.size(); ++i)
        for (std::size_t j = 0; j < D.cols.size(); ++j)
            if (D.cols[j] != "1g") CHECK(D.at(i, j).is_zero());

    auto S = classical(surgered_sphere(3));
    auto DS = floer_differential(S, Cochain());
    auto col = index_of(DS.cols, "handle_n");
    CHECK(same(DS.at(index_of(DS.rows, "sph+"), col), Element(1.0)));
    CHECK(same(DS.at(index_of(DS.rows, "sph-"), col), Element(-1.0)));
    CHECK(multiply(DS, DS).is_zero());
}

TEST_CASE("worked example differential squares to zero") {
    auto ex = examples::immersed_circle();
    auto D = floer_differential(ex.algebra, ex.b0);
    CHECK(multiply(D, D).is_zero());
    auto H = hf_dimension(ex.algebra, ex.b0);
    CHECK(H.generators == D.cols.size());
    CHECK(H.dim + 2 * H.cert.rank == H.generators);
}

TEST_CASE("curved cochains are refused") {
    auto ex = examples::immersed_circle();
    CHECK(error_of([&] { floer_differential(ex.algebra, Cochain()); }) == ErrorCode::NotProjectivelyFlat);
    CHECK_NOTHROW(floer_differential(ex.algebra, Cochain(), false));
}

TEST_CASE("dimension of small complexes") {
    auto Z = square({"a", "b", "c"});
    CHECK(hf_dimension_of(Z).dim == 3);

    auto D = square({"a", "b"});
    D.at(1, 0) = q(1);
    auto H = hf_dimension_of(D);
    CHECK(H.dim == 0);
    REQUIRE(H.cert.pivots.size() == 1);
    CHECK(H.cert.pivots[0].val == Rational(1));
    CHECK(H.cert.pivots[0].row == 1);
    CHECK(H.cert.pivots[0].col == 0);

    auto N = square({"a", "b", "c"});
    N.at(1, 0) = q(1);
    N.at(2, 1) = q(1);
    CHECK(error_of([&] { hf_dimension_of(N); }) == ErrorCode::SquareNotZero);
}

TEST_CASE("minimal valuation pivoting") {
    Matrix M({"r0", "r1"}, {"c0", "c1"});
    M.at(0, 0) = q(2);
    M.at(0, 1) = q(1);
    M.at(1, 0) = q(1);
    M.at(1, 1) = Element(1.0) + q(1);
    auto cert = rank(M);
    REQUIRE(cert.rank == 2);
    CHECK(cert.pivots[0].row == 1);
    CHECK(cert.pivots[0].col == 1);
    CHECK(cert.pivots[0].val == Rational(0));
}

TEST_CASE("rank certificate margins") {
    Matrix M({"r0", "r1"}, {"c0", "c1"});
    M.at(0, 0) = Element(1.0);
    M.at(1, 1) = zero_at(Rational(3));
    auto c = rank(M);
    CHECK(c.rank == 1);
    CHECK(c.margin == Ext(Rational(3)));
    CHECK_FALSE(c.below_safety);

    M.at(1, 1) = zero_at(Rational(1, 4));
    CHECK(rank(M).below_safety);

    M.at(0, 0) = q(2);
    M.at(1, 1) = zero_at(Rational(1));
    CHECK(error_of([&] { rank(M); }) == ErrorCode::RankUnstable);
}

TEST_CASE("adjoining an acyclic pair keeps the dimension") {
    auto D = square({"a", "b", "c"});
    D.at(1, 0) = q(1);
    auto E = square({"a", "b", "c", "u", "v"});
    E.at(1, 0) = q(1);
    E.at(4, 3) = q(Rational(1, 2));
    auto Q = ess_quotient(E, {Cochain::single("u"), Cochain::single("v")});
    CHECK(Q.hf.dim == hf_dimension_of(D).dim);
    CHECK(hf_dimension_of(E).dim == hf_dimension_of(D).dim);
    CHECK(Q.basis.size() == 3);
}

TEST_CASE("local subcomplex on the surgered side") {
    for (int n = 2; n <= 4; ++n) {
        INFO("n = " << n);
        auto A = classical(surgered_sphere(n));
        std::vector<Cochain> loc{Cochain::single("handle_n"),
                                 Cochain::single("sph+") - Cochain::single("sph-")};
        auto Q = ess_quotient(A, Cochain(), loc);
        CHECK(Q.hf.dim == hf_dimension(A, Cochain()).dim);
        CHECK(Q.basis.size() + 2 == A.basis().size());
    }
}

TEST_CASE("local subcomplex on the unsurgered side") {
    auto A = classical(cellular::builders::sphere_with_two_balls(3));
    auto m1 = ainfty::m(A, {"ball+"});
    CHECK(same(m1, Cochain::single("sph+")));
    std::vector<Cochain> loc{Cochain::single("ball+"), Cochain::single("ball-"), Cochain::single("sph+"),
                             Cochain::single("sph-")};
    auto Q = ess_quotient(A, Cochain(), loc);
    CHECK(Q.hf.dim == hf_dimension(A, Cochain()).dim);
}

TEST_CASE("quotient errors") {
    auto A = classical(cellular::builders::sphere_with_two_balls(3));
    CHECK(error_of([&] { ess_quotient(A, Cochain(), {Cochain::single("ball+")}); }) == ErrorCode::NotSubcomplex);
    CHECK(error_of([&] { ess_quotient(A, Cochain(), {Cochain::single("pt+")}); }) == ErrorCode::NotAcyclic);
    CHECK(error_of([&] { ess_quotient(A, Cochain(), {Cochain::single("zz")}); }) == ErrorCode::UnknownGenerator);
}

}
