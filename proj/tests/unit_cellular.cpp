#include "support.hpp"

#include "lagsurg/cellular.hpp"

#include <algorithm>

using namespace lagsurg;
using namespace lagsurg::cellular;
using lagsurg::testing::error_of;
using lagsurg::testing::same;
using novikov::Element;

namespace {

bool has_kind(const std::vector<Violation>& vs, const std::string& kind) {
    return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.kind == kind; });
}

std::int64_t coef(const CellComplex& C, const std::string& from, const std::string& to) {
    auto it = C.boundary.find({from, to});
    return it == C.boundary.end() ? 0 : it->second;
}

} // namespace

TEST_SUITE("cellular") {

TEST_CASE("circle is a valid complex") {
    CHECK(validate_complex(builders::circle()).empty());
    CHECK(euler_characteristic(builders::circle()) == 0);
}

TEST_CASE("two-vertex circle") {
    auto C = builders::circle_two_vertices();
    CHECK(validate_complex(C).empty());
    CHECK(euler_characteristic(C) == 0);
    CHECK(C.c("v0", "e0") == 1);
    CHECK(C.c("e1", "v1") == 1);
}

TEST_CASE("sphere with two balls is valid in every dimension") {
    for (int n = 2; n <= 6; ++n) {
        auto C = builders::sphere_with_two_balls(n);
        INFO("n = " << n);
        CHECK(validate_complex(C).empty());
        CHECK(euler_characteristic(C) == 1 + (n % 2 == 0 ? 1 : -1));
    }
}

TEST_CASE("d squared nonzero is reported") {
    CellComplex C;
    C.n = 2;
    C.cells = {{"p", 0}, {"e", 1}, {"f", 2}};
    C.boundary[{"e", "p"}] = 1;
    C.boundary[{"f", "e"}] = 1;
    auto vs = validate_complex(C);
    CHECK(has_kind(vs, "d_squared"));
}

TEST_CASE("malformed complexes") {
    CellComplex C = builders::circle();
    C.boundary[{"sigma_1", "ghost"}] = 1;
    CHECK(has_kind(validate_complex(C), "unknown_cell"));

    CellComplex D = builders::circle();
    D.cells.push_back({"sigma_0", 0});
    CHECK(has_kind(validate_complex(D), "duplicate_cell"));

    CellComplex E = builders::circle();
    E.diagonal[{"sigma_0", "sigma_0"}] = 1;
    CHECK(has_kind(validate_complex(E), "diagonal_dim"));
}

TEST_CASE("a broken diagonal fails the cycle identity") {
    auto C = builders::sphere_with_two_balls(3);
    C.diagonal.erase({"sph+", "arc"});
    CHECK(has_kind(validate_complex(C), "cycle_identity"));
}

TEST_CASE("extended diagonal") {
    auto C = builders::circle();
    auto c = extend_diagonal(C, {{"x", "xb"}});
    CHECK(c("x", "xb") == 1);
    CHECK(c("xb", "x") == 1);
    CHECK(c("x", "x") == 0);
    CHECK(c("sigma_0", "x") == 0);
    CHECK(c("sigma_0", "sigma_1") == 1);
    CHECK(error_of([&] { c("nope", "x"); }) == ErrorCode::UnknownGenerator);
    CHECK(error_of([&] { extend_diagonal(C, {{"x", "x"}}); }) == ErrorCode::UnknownGenerator);
    CHECK(error_of([&] { extend_diagonal(C, {{"sigma_0", "y"}}); }) == ErrorCode::UnknownGenerator);
}

TEST_CASE("cup product on the circle") {
    auto C = builders::circle();
    CellCochain unit{{"sigma_0", Element(1.0)}};
    CellCochain a{{"sigma_1", Element(3.0)}};
    auto u = cup_product(C, unit, a);
    REQUIRE(u.count("sigma_1") == 1);
    CHECK(same(u.at("sigma_1"), Element(3.0)));
    CHECK(cup_product(C, a, a).empty());
    CHECK(error_of([&] { cup_product(C, unit, unit); }) == ErrorCode::DimensionMismatch);
    CHECK(error_of([&] { cup_product(C, CellCochain{{"zzz", Element(1.0)}}, a); }) == ErrorCode::UnknownGenerator);
}

TEST_CASE("surgery on cells") {
    for (int n = 2; n <= 6; ++n) {
        INFO("n = " << n);
        auto C0 = builders::sphere_with_two_balls(n);
        auto Ce = surger_cells(C0, builders::sphere_ball(true), builders::sphere_ball(false));
        CHECK(!Ce.dim_of("ball+"));
        CHECK(!Ce.dim_of("ball-"));
        CHECK(coef(Ce, "handle_n", "sph+") == 1);
        CHECK(coef(Ce, "handle_n", "sph-") == -1);
        CHECK(coef(Ce, "handle_1", "pt+") == 1);
        CHECK(coef(Ce, "handle_1", "pt-") == -1);
        int sign = n % 2 == 0 ? 1 : -1;
        CHECK(euler_characteristic(Ce) == euler_characteristic(C0) - 2 * sign + (sign - 1));
        CHECK(validate_complex(Ce).empty());
    }
}

TEST_CASE("surgery sign flags") {
    auto C0 = builders::sphere_with_two_balls(3);
    SurgerOptions opts;
    opts.sigma_1_sign = -1;
    auto Ce = surger_cells(C0, builders::sphere_ball(true), builders::sphere_ball(false), opts);
    CHECK(coef(Ce, "handle_1", "pt+") == -1);
    CHECK(coef(Ce, "handle_1", "pt-") == 1);
}

TEST_CASE("surgery errors") {
    auto C = builders::sphere_with_two_balls(2);
    StandardBall bad{"rest", "sph+", "pt+"};
    CHECK(error_of([&] { surger_cells(C, bad, builders::sphere_ball(false)); }) == ErrorCode::MissingBall);
    StandardBall missing{"nope", "sph+", "pt+"};
    CHECK(error_of([&] { surger_cells(C, missing, builders::sphere_ball(false)); }) == ErrorCode::MissingBall);
    CHECK(error_of([&] {
              surger_cells(builders::circle(), builders::sphere_ball(true), builders::sphere_ball(false));
          }) == ErrorCode::DimensionTooLow);
    CHECK(error_of([] { builders::sphere_with_two_balls(1); }) == ErrorCode::DimensionTooLow);
}

TEST_CASE("disjoint union") {
    auto U = builders::disjoint_union(builders::circle("a", "b"), builders::circle("c", "d"));
    CHECK(U.cells.size() == 4);
    CHECK(validate_complex(U).empty());
    CHECK(error_of([] { builders::disjoint_union(builders::circle(), builders::circle()); }) ==
          ErrorCode::InvalidInput);
}

}
