#pragma once

#include "lagsurg/ainfty.hpp"
#include "lagsurg/cone.hpp"
#include "lagsurg/surgery.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <random>
#include <string>
#include <vector>

namespace lagsurg::examples {

using ainfty::Algebra;
using ainfty::Cochain;
using novikov::Element;
using novikov::Rational;

// Immersed circle with three self-intersections and its surgery at x.
struct CircleExample {
    Algebra algebra;
    Cochain b0;
    Rational delta;
    surgery::SurgeryData data;
    cellular::CellComplex target;
    std::map<std::string, Element> target_local;
    Element expected_W;
};

CircleExample immersed_circle(const Rational& A0 = Rational(2), const Rational& A1 = Rational(1));

struct SurgeryExample {
    Algebra algebra;
    Cochain b0;
    Rational delta;
    surgery::SurgeryData data;
};

// Sphere of dimension n with one self-intersection pair passed once forwards and once backwards.
SurgeryExample dim_synthetic(int n = 3);

struct ConeExample {
    cone::BimoduleAtlas atlas;
    Cochain b;
    Cochain b_minus;
    Cochain b_plus;
    std::string x;
    Rational A_eps;
};

ConeExample embedded_pair_cone();

struct RandomOptions {
    int max_disks = 6;
    int max_passes = 2;
    int max_inputs = 3;
};

// Random finite atlas on sphere_with_two_balls(n) with an admissible b0 at (x, xb).
// No disk touches the ball or sphere cells of the handle.
SurgeryExample random_surgery_example(std::mt19937& rng, int n, const RandomOptions& opts = {});

// Random immersed circle on circle_two_vertices() for gauge experiments.
SurgeryExample random_gauge_example(std::mt19937& rng);

std::vector<std::string> names();

// File name -> JSON document for a bundled scenario. Throws UnknownExample.
std::map<std::string, nlohmann::json> bundle(const std::string& name);

} // namespace lagsurg::examples
