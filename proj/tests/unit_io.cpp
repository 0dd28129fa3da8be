#include "support.hpp"

#include "lagsurg/examples.hpp"
#include "lagsurg/io.hpp"

#include <filesystem>

using namespace lagsurg;
using lagsurg::novikov::Element;
using lagsurg::novikov::q;
using lagsurg::novikov::Rational;
using lagsurg::testing::error_of;
using lagsurg::testing::I;
using lagsurg::testing::mono;
using lagsurg::testing::same;
using nlohmann::json;

namespace {

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

bool same_complex(const cellular::CellComplex& a, const cellular::CellComplex& b) {
    if (a.n != b.n || a.cells.size() != b.cells.size()) return false;
    for (std::size_t i = 0; i < a.cells.size(); ++i)
        if (a.cells[i].name != b.cells[i].name || a.cells[i].dim != b.cells[i].dim) return false;
    return a.boundary == b.boundary && a.diagonal == b.diagonal;
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("elements") {
    auto e = truncate(mono(I, Rational(-1, 3)) + novikov::scale(q(2), 0.5), novikov::Ext(Rational(4)));
    auto back = io::element_from_json(io::to_json(e));
    CHECK(same(back, e));
    CHECK(back.trunc() == e.trunc());
    CHECK(same(io::element_from_json(json(2.5)), Element(2.5)));
    CHECK(io::element_from_json(io::to_json(Element())).is_zero());
    json bad = {{"terms", {{{"exp", "1/0"}, {"re", 1}, {"im", 0}}}}};
    CHECK(error_of([&] { io::element_from_json(bad); }) == ErrorCode::ParseError);
}

TEST_CASE("complexes") {
    auto C = cellular::builders::sphere_with_two_balls(3);
    CHECK(same_complex(io::complex_from_json(io::to_json(C)), C));
    auto j = io::to_json(C);
    j.erase("cells");
    CHECK(error_of([&] { io::complex_from_json(j); }) == ErrorCode::ParseError);
    CHECK(message_of([&] { io::complex_from_json(j); }).find("cells") != std::string::npos);
}

TEST_CASE("cochains and disks") {
    ainfty::Cochain c = ainfty::Cochain::single("x", mono(I, Rational(-1, 4))) + ainfty::Cochain::single("arc", q(1));
    CHECK(same(io::cochain_from_json(io::to_json(c)), c));

    ainfty::Disk d;
    d.inputs = {"x", "arc"};
    d.output = "yb";
    d.area = Rational(7, 3);
    d.sign = -1;
    d.sym = ainfty::Weight(1) / 6;
    d.holonomy = {{"L", 2}, {"M", -1}};
    d.constant_on_handle = true;
    d.annotations = {{"drop", "true"}};
    auto e = io::disk_from_json(io::to_json(d), "disk");
    CHECK(e.inputs == d.inputs);
    CHECK(e.output == d.output);
    CHECK(e.area == d.area);
    CHECK(e.sign == d.sign);
    CHECK(e.sym == d.sym);
    CHECK(e.holonomy == d.holonomy);
    CHECK(e.constant_on_handle);
    CHECK(e.annotations == d.annotations);
}

TEST_CASE("options") {
    ainfty::AlgebraOptions o;
    o.koszul_units = false;
    o.classical_grey = false;
    o.trunc = novikov::Ext(Rational(9, 2));
    o.delta_gap = Rational(2, 3);
    auto p = io::options_from_json(io::to_json(o));
    CHECK_FALSE(p.koszul_units);
    CHECK(p.classical_boundary);
    CHECK_FALSE(p.classical_grey);
    CHECK(p.trunc == o.trunc);
    CHECK(p.delta_gap == o.delta_gap);
}

TEST_CASE("algebras round trip") {
    auto ex = examples::immersed_circle();
    auto A = io::algebra_from_json(io::to_json(ex.algebra));
    CHECK(A.basis().size() == ex.algebra.basis().size());
    CHECK(A.atlas().size() == ex.algebra.atlas().size());
    CHECK(A.options().delta_gap == ex.algebra.options().delta_gap);
    for (const auto& d : ex.algebra.atlas()) CHECK(same(ainfty::m(A, d.inputs), ainfty::m(ex.algebra, d.inputs)));
}

TEST_CASE("surgery specs round trip") {
    io::SurgeryInput s;
    s.data.x = "x";
    s.data.xbar = "xb";
    s.data.A_eps = Rational(1, 4);
    s.data.meridian_minus = true;
    s.data.sigma_1_sign = -1;
    s.data.literal_dpsi = true;
    s.data.branch = 1;
    s.caps.R = 20;
    s.caps.S = 7;
    auto t = io::surgery_from_json(io::to_json(s));
    CHECK(t.data.x == "x");
    CHECK(t.data.A_eps == Rational(1, 4));
    CHECK(t.data.meridian_minus);
    CHECK(t.data.sigma_1_sign == -1);
    CHECK(t.data.sigma_n_sign == 1);
    CHECK(t.data.literal_dpsi);
    CHECK(t.data.branch == 1);
    CHECK(t.caps.R == 20);
    CHECK(t.caps.S == 7);
    CHECK_FALSE(t.annotated);
    CHECK_FALSE(t.target);
}

TEST_CASE("bimodule atlases round trip") {
    auto ex = examples::embedded_pair_cone();
    auto B = io::bimodule_from_json(io::to_json(ex.atlas));
    CHECK(B.disks.size() == ex.atlas.disks.size());
    CHECK(B.sector == ex.atlas.sector);
    CHECK(B.options.delta_gap == ex.atlas.options.delta_gap);
    auto cmp = cone::compare_cone_surgery(B, ex.x, ex.A_eps, ex.b);
    CHECK(cmp.discrepancy == doctest::Approx(0.0));
}

TEST_CASE("report shapes") {
    floer::Matrix D({"a", "b"}, {"a", "b"});
    D.at(1, 0) = q(Rational(1, 2));
    auto j = io::to_json(floer::hf_dimension_of(D));
    CHECK(j.at("dim") == 0);
    CHECK(j.at("rank") == 1);
    CHECK(j.at("pivots").at(0).at("val") == "1/2");
    CHECK(j.contains("margin"));
}

TEST_CASE("bundles parse with the matching readers") {
    for (const auto& name : examples::names()) {
        INFO(name);
        auto files = examples::bundle(name);
        CHECK(!files.empty());
        if (files.count("algebra.json")) {
            auto A = io::algebra_from_json(files.at("algebra.json"));
            CHECK(ainfty::validate_atlas(A).empty());
            CHECK_NOTHROW(io::cochain_from_json(files.at("b0.json")));
            CHECK_NOTHROW(io::surgery_from_json(files.at("surgery.json")));
        }
        if (files.count("bimodule.json")) CHECK_NOTHROW(io::bimodule_from_json(files.at("bimodule.json")));
    }
    CHECK(error_of([] { examples::bundle("no-such-example"); }) == ErrorCode::UnknownExample);
}

TEST_CASE("files") {
    auto dir = std::filesystem::temp_directory_path() / "lagsurg_unit_io";
    std::filesystem::create_directories(dir);
    auto path = (dir / "c.json").string();
    auto C = cellular::builders::circle();
    io::write_file(path, io::to_json(C));
    CHECK(same_complex(io::complex_from_json(io::read_file(path)), C));
    std::filesystem::remove_all(dir);
    CHECK(error_of([&] { io::read_file(path); }) == ErrorCode::ParseError);
}

}
