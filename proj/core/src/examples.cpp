#include "lagsurg/examples.hpp"

#include "lagsurg/errors.hpp"
#include "lagsurg/io.hpp"

#include <algorithm>
#include <cmath>

namespace lagsurg::examples {

using ainfty::Disk;
using ainfty::GenKind;
using ainfty::Generator;

namespace {

Disk disk(std::vector<std::string> inputs, std::string output, Rational area, int sign,
          std::map<std::string, std::string> annotations = {}) {
    Disk d;
    d.inputs = std::move(inputs);
    d.output = std::move(output);
    d.area = area;
    d.sign = sign;
    d.annotations = std::move(annotations);
    return d;
}

Generator si(const std::string& name, const std::string& conjugate, int parity) {
    return {name, GenKind::SelfIntersection, 0, conjugate, parity};
}

Element mono(novikov::Complex c, Rational e) { return Element::monomial(c, e); }

Element polar(double r, double theta, Rational e) { return mono(std::polar(r, theta), e); }

template <class T>
const T& pick(std::mt19937& rng, const std::vector<T>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

// Immersed circle with lobes of area A1 and a central triangle of area A0.
CircleExample circle_with_lobes(const Rational& A0, const Rational& A1) {
    if (!(A1 < A0) || !(A0 < Rational(3) * A1))
        fail(ErrorCode::InvalidInput, "the immersed circle needs A1 < A0 < 3 A1");
    const novikov::Complex I(0, 1);
    std::vector<Generator> gens = {si("x", "xb", 1),  si("x'", "xb'", 1),  si("x''", "xb''", 1),
                                   si("xb", "x", 0),  si("xb'", "x'", 0),  si("xb''", "x''", 0)};
    const Rational A_eps = (A0 - A1) / 2;
    const std::map<std::string, std::string> shifted_x_input{
        {"drop_x_inputs", "true"}, {"holonomy", "la:1"}, {"area_shift", "-1"}};
    std::vector<Disk> atlas = {
        disk({}, "x", A1, 1, {{"output", "sigma_0a"}, {"holonomy", "la:1"}, {"area_shift", "-1"}}),
        disk({}, "x'", A1, 1),
        disk({}, "x''", A1, 1),
        disk({"x'", "x''"}, "x", A0, -1, {{"output", "sigma_0b"}, {"holonomy", "lb:-1"}, {"area_shift", "-1"}}),
        disk({"x''", "x"}, "x'", A0, -1, shifted_x_input),
        disk({"x", "x'"}, "x''", A0, -1, shifted_x_input),
        disk({"x"}, "sigma_0", A1, -1, {{"drop", "true"}}),
    };
    ainfty::AlgebraOptions opts;
    opts.delta_gap = A0 / 3;

    CircleExample ex;
    ex.algebra = Algebra(cellular::builders::circle(), gens, atlas, {}, opts);
    ex.b0.add("1g", mono(I, (Rational(3) * A1 - A0) / 2));
    for (const char* g : {"x", "x'", "x''"}) ex.b0.add(g, mono(I, -A_eps));
    ex.delta = (A_eps + opts.delta_gap) / 2;
    ex.data.x = "x";
    ex.data.xbar = "xb";
    ex.data.A_eps = A_eps;
    ex.target = cellular::builders::disjoint_union(cellular::builders::circle("sigma_0a", "sigma_1a"),
                                                   cellular::builders::circle("sigma_0b", "sigma_1b"));
    ex.target_local = {{"la", Element(I)}, {"lb", Element(I)}};
    ex.expected_W = mono(I, (Rational(3) * A1 - A0) / 2);
    return ex;
}

} // namespace

CircleExample immersed_circle(const Rational& A0, const Rational& A1) { return circle_with_lobes(A0, A1); }

SurgeryExample dim_synthetic(int n) {
    if (n < 3) fail(ErrorCode::DimensionTooLow, "the synthetic example needs n >= 3");
    const int pbar = n % 2 == 0 ? 1 : 0;
    std::vector<Generator> gens = {si("x", "xb", 1), si("xb", "x", pbar), si("y", "yb", 1), si("yb", "y", pbar)};
    std::vector<Disk> atlas = {
        disk({}, "x", 1, 1),
        disk({"x"}, "y", 2, 1),
        disk({"x", "arc"}, "yb", 2, -1),
        disk({"xb"}, "arc", 2, 1),
        disk({"y", "x"}, "x", 3, 1),
        disk({"xb", "y"}, "xb", 3, -1),
        disk({"x", "x"}, "rest", 3, 1),
        disk({"x", "xb", "y"}, "pt+", 4, 1),
    };
    SurgeryExample ex;
    ex.algebra = Algebra(cellular::builders::sphere_with_two_balls(n), gens, atlas, {});
    ex.b0.set("x", mono({0.8, 0.6}, Rational(-1, 4)));
    ex.b0.set("y", mono({0.3, 0.1}, Rational(1, 2)));
    if (pbar == 1) {
        ex.b0.set("xb", mono({1.3, -0.2}, Rational(1, 2)));
        ex.b0.set("arc", mono({0.5, 0}, Rational(1)));
    } else {
        ex.b0.set("pt+", mono({0.5, 0}, Rational(1)));
        ex.b0.set("pt-", mono({-0.25, 0.4}, Rational(3, 2)));
    }
    ex.delta = Rational(3, 5);
    ex.data.x = "x";
    ex.data.xbar = "xb";
    ex.data.A_eps = Rational(1, 4);
    return ex;
}

ConeExample embedded_pair_cone() {
    const novikov::Complex I(0, 1);
    ConeExample ex;
    auto& B = ex.atlas;
    B.minus = cellular::builders::circle("a0", "a1");
    B.plus = cellular::builders::circle("c0", "c1");
    B.mixed = {si("x", "xb", 0), si("xb", "x", 1), si("y", "yb", 0), si("yb", "y", 1)};
    B.sector = {{"x", cone::Sector::MP}, {"y", cone::Sector::MP}, {"xb", cone::Sector::PM}, {"yb", cone::Sector::PM}};
    B.disks = {
        disk({"y"}, "xb", Rational(3, 2), 1),
        disk({"a1", "x"}, "yb", Rational(3, 2), 1),
        disk({"x", "c1"}, "yb", Rational(3, 2), -1),
        disk({"x", "yb"}, "a1", Rational(3, 2), 1),
        disk({"yb", "x"}, "c1", 3, -1),
    };
    B.options.delta_gap = Rational(3, 4);
    ex.x = "x";
    ex.A_eps = Rational(1, 4);
    ex.b.set("x", mono(I, Rational(-1, 4)));
    return ex;
}

SurgeryExample random_surgery_example(std::mt19937& rng, int n, const RandomOptions& opts) {
    if (n < 3) fail(ErrorCode::DimensionTooLow, "random surgery atlases need n >= 3");
    const int pbar = n % 2 == 0 ? 1 : 0;
    std::vector<Generator> gens = {si("x", "xb", 1), si("xb", "x", pbar), si("y", "yb", 1), si("yb", "y", pbar)};
    const std::vector<std::string> inputs = {"x", "xb", "y", "yb", "arc", "pt+", "pt-"};
    const std::vector<std::string> outputs = {"x", "xb", "y", "yb", "arc", "pt+", "pt-", "rest"};
    auto is_si = [](const std::string& g) { return g == "x" || g == "xb" || g == "y" || g == "yb"; };
    auto is_pass = [](const std::string& g) { return g == "x" || g == "xb"; };

    const int count = std::uniform_int_distribution<int>(2, opts.max_disks)(rng);
    std::vector<Disk> atlas;
    while (static_cast<int>(atlas.size()) < count) {
        Disk d;
        const int len = std::uniform_int_distribution<int>(0, opts.max_inputs)(rng);
        for (int i = 0; i < len; ++i) d.inputs.push_back(pick(rng, inputs));
        d.output = pick(rng, outputs);
        if (atlas.empty() && std::find(d.inputs.begin(), d.inputs.end(), "x") == d.inputs.end())
            d.inputs.insert(d.inputs.begin(), "x");
        int passes = is_pass(d.output) ? 1 : 0;
        int corners = is_si(d.output) ? 1 : 0;
        for (const auto& g : d.inputs) {
            passes += is_pass(g) ? 1 : 0;
            corners += is_si(g) ? 1 : 0;
        }
        if (passes > opts.max_passes) continue;
        d.area = Rational(corners) + Rational(std::uniform_int_distribution<int>(0, 4)(rng), 4);
        if (d.area == Rational(0)) d.area = Rational(1, 4);
        d.sign = std::bernoulli_distribution(0.5)(rng) ? 1 : -1;
        d.sym = std::bernoulli_distribution(0.25)(rng) ? ainfty::Weight(1, 2) : ainfty::Weight(1);
        atlas.push_back(std::move(d));
    }

    SurgeryExample ex;
    ex.algebra = Algebra(cellular::builders::sphere_with_two_balls(n), gens, atlas, {});
    std::uniform_real_distribution<double> modulus(0.5, 2.0), phase(-1.5, 1.5), small(0.1, 1.0), angle(-3.1, 3.1);
    const Rational v = pick(rng, std::vector<Rational>{Rational(-1, 8), Rational(-1, 4), Rational(-1, 3), Rational(-3, 8)});
    ex.b0.set("x", polar(modulus(rng), phase(rng), v));
    ex.b0.set("y", polar(small(rng), angle(rng), pick(rng, std::vector<Rational>{Rational(0), Rational(1, 4), Rational(1, 2)})));
    if (pbar == 1) {
        ex.b0.set("xb", polar(small(rng), angle(rng), pick(rng, std::vector<Rational>{Rational(1, 2), Rational(3, 4)})));
        ex.b0.set("yb", polar(small(rng), angle(rng), Rational(1, 2)));
        ex.b0.set("arc", polar(small(rng), angle(rng), Rational(1)));
    } else {
        ex.b0.set("pt+", polar(small(rng), angle(rng), Rational(1, 2)));
        ex.b0.set("pt-", polar(small(rng), angle(rng), Rational(1)));
    }
    ex.delta = Rational(1, 2);
    ex.data.x = "x";
    ex.data.xbar = "xb";
    ex.data.A_eps = -v;
    return ex;
}

SurgeryExample random_gauge_example(std::mt19937& rng) {
    const Rational A1 = pick(rng, std::vector<Rational>{Rational(1), Rational(3, 2), Rational(2)});
    const Rational r = pick(rng, std::vector<Rational>{Rational(3, 2), Rational(7, 4), Rational(2), Rational(9, 4)});
    CircleExample c = circle_with_lobes(A1 * r, A1);
    // Same atlas on a two-vertex circle, so that even cells have nonzero boundary.
    std::vector<Disk> atlas = c.algebra.atlas();
    for (auto& d : atlas)
        if (d.output == "sigma_0") d.output = "v0";
    Algebra A(cellular::builders::circle_two_vertices(), c.algebra.si_generators(), atlas,
              c.algebra.local_system(), c.algebra.options());
    return {A, c.b0, c.delta, c.data};
}

std::vector<std::string> names() { return {"immersed-circle", "embedded-pair-cone", "dim3-synthetic"}; }

std::map<std::string, nlohmann::json> bundle(const std::string& name) {
    std::map<std::string, nlohmann::json> files;
    auto surgery_files = [&](const Algebra& A, const Cochain& b0, const surgery::SurgeryData& data) {
        files["algebra.json"] = io::to_json(A);
        files["b0.json"] = io::to_json(b0);
        io::SurgeryInput spec;
        spec.data = data;
        return spec;
    };
    if (name == "immersed-circle") {
        auto ex = immersed_circle();
        auto spec = surgery_files(ex.algebra, ex.b0, ex.data);
        spec.annotated = true;
        spec.target = ex.target;
        spec.target_local = ex.target_local;
        files["surgery.json"] = io::to_json(spec);
    } else if (name == "dim3-synthetic") {
        auto ex = dim_synthetic(3);
        files["surgery.json"] = io::to_json(surgery_files(ex.algebra, ex.b0, ex.data));
    } else if (name == "embedded-pair-cone") {
        auto ex = embedded_pair_cone();
        files["bimodule.json"] = io::to_json(ex.atlas);
        files["cone.json"] = {{"x", ex.x},
                              {"A_eps", novikov::format_rational(ex.A_eps)},
                              {"b", io::to_json(ex.b)},
                              {"b_minus", io::to_json(ex.b_minus)},
                              {"b_plus", io::to_json(ex.b_plus)}};
    } else {
        fail(ErrorCode::UnknownExample, "unknown example '" + name + "'");
    }
    return files;
}

} // namespace lagsurg::examples
