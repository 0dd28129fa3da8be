#pragma once

#include "lagsurg/novikov.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lagsurg::cellular {

struct Cell {
    std::string name;
    int dim = 0;
};

// (from, to) -> coefficient of `to` in the boundary of `from`.
using BoundaryMap = std::map<std::pair<std::string, std::string>, std::int64_t>;
// (primal cell, dual cell) -> diagonal coefficient.
using DiagonalMap = std::map<std::pair<std::string, std::string>, std::int64_t>;

struct CellComplex {
    int n = 0;
    std::vector<Cell> cells;
    BoundaryMap boundary;
    // Empty dual_cells means the dual decomposition is the primal one.
    std::vector<Cell> dual_cells;
    BoundaryMap dual_boundary;
    DiagonalMap diagonal;

    bool dual_is_primal() const { return dual_cells.empty(); }
    const std::vector<Cell>& duals() const { return dual_is_primal() ? cells : dual_cells; }
    const BoundaryMap& dual_bd() const { return dual_is_primal() ? boundary : dual_boundary; }

    std::optional<int> dim_of(const std::string& name) const;
    std::optional<int> dual_dim_of(const std::string& name) const;
    // Boundary of a primal cell as (face, coefficient) pairs.
    std::vector<std::pair<std::string, std::int64_t>> boundary_of(const std::string& name) const;
    std::int64_t c(const std::string& cell, const std::string& dual) const;
};

struct Violation {
    std::string kind;
    std::string a;
    std::string b;
    std::int64_t value = 0;
    std::string message;
};

std::vector<Violation> validate_complex(const CellComplex& C);

int euler_characteristic(const CellComplex& C);

// Cellular c extended by c(x, xbar) = c(xbar, x) = 1 on ordered self-intersection pairs.
class ExtendedDiagonal {
  public:
    ExtendedDiagonal() = default;
    ExtendedDiagonal(const CellComplex& C, const std::vector<std::pair<std::string, std::string>>& si_pairs);
    std::int64_t operator()(const std::string& a, const std::string& b) const;
    bool knows(const std::string& name) const;

  private:
    DiagonalMap cells_;
    std::unordered_map<std::string, std::string> conj_;
    std::unordered_map<std::string, int> cell_names_;
};

ExtendedDiagonal extend_diagonal(const CellComplex& C, const std::vector<std::pair<std::string, std::string>>& si_pairs);

using CellCochain = std::map<std::string, novikov::Element>;

// a is a cochain on primal cells, b a cochain on dual cells. Products landing
// above the top degree vanish; the top-degree product is the evaluation of
// delta^*(a x b) on the fundamental class, placed on the first top cell.
CellCochain cup_product(const CellComplex& C, const CellCochain& a, const CellCochain& b);

struct StandardBall {
    std::string top;
    std::string sphere;
    std::string point;
};

// Checks the standard-ball shape; returns the sign s with d(top) = s * sphere.
int check_standard_ball(const CellComplex& C, const StandardBall& ball);

struct SurgerOptions {
    std::string sigma_1 = "handle_1";
    std::string sigma_n = "handle_n";
    // Multiplies the displayed boundaries of sigma_1 and sigma_n.
    int sigma_1_sign = 1;
    int sigma_n_sign = 1;
    std::optional<DiagonalMap> handle_diagonal;
};

CellComplex surger_cells(const CellComplex& C0, const StandardBall& plus, const StandardBall& minus,
                         const SurgerOptions& opts = {});

namespace builders {

// One 0-cell and one 1-cell with c(pt, arc) = c(arc, pt) = 1.
CellComplex circle(const std::string& point = "sigma_0", const std::string& arc = "sigma_1");
// Circle with vertices v0, v1 and edges e0: v0 -> v1, e1: v1 -> v0.
CellComplex circle_two_vertices();

// S^n as two standard balls glued to a cylinder; valid diagonal included.
CellComplex sphere_with_two_balls(int n);
StandardBall sphere_ball(bool plus);

// Disjoint union; names must not clash.
CellComplex disjoint_union(const CellComplex& a, const CellComplex& b);

} // namespace builders

} // namespace lagsurg::cellular
