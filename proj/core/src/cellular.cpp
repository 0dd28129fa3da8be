#include "lagsurg/cellular.hpp"

#include "lagsurg/errors.hpp"

#include <set>

namespace lagsurg::cellular {

namespace {

std::optional<int> find_dim(const std::vector<Cell>& cells, const std::string& name) {
    for (const auto& c : cells)
        if (c.name == name) return c.dim;
    return std::nullopt;
}

std::int64_t lookup(const BoundaryMap& m, const std::string& a, const std::string& b) {
    auto it = m.find({a, b});
    return it == m.end() ? 0 : it->second;
}

void check_names(const std::vector<Cell>& cells, const std::string& label, std::vector<Violation>& out) {
    std::set<std::string> seen;
    for (const auto& c : cells) {
        if (!seen.insert(c.name).second)
            out.push_back({"duplicate_cell", c.name, "", 0, label + " cell '" + c.name + "' appears twice"});
        if (c.dim < 0) out.push_back({"negative_dim", c.name, "", c.dim, label + " cell has negative dimension"});
    }
}

void check_boundary(const std::vector<Cell>& cells, const BoundaryMap& bd, const std::string& label,
                    std::vector<Violation>& out) {
    for (const auto& [key, coef] : bd) {
        auto df = find_dim(cells, key.first);
        auto dt = find_dim(cells, key.second);
        if (!df || !dt) {
            out.push_back({"unknown_cell", key.first, key.second, coef, label + " boundary names an unknown cell"});
            continue;
        }
        if (*dt != *df - 1)
            out.push_back({"boundary_dim", key.first, key.second, coef,
                           label + " boundary entry does not lower dimension by one"});
    }
    // d o d = 0
    for (const auto& a : cells) {
        std::map<std::string, std::int64_t> sq;
        for (const auto& [key, c1] : bd) {
            if (key.first != a.name) continue;
            for (const auto& [key2, c2] : bd)
                if (key2.first == key.second) sq[key2.second] += c1 * c2;
        }
        for (const auto& [g, v] : sq)
            if (v != 0)
                out.push_back({label == "primal" ? "d_squared" : "dual_d_squared", a.name, g, v,
                               label + " boundary squared is nonzero on (" + a.name + ", " + g + ")"});
    }
}

} // namespace

std::optional<int> CellComplex::dim_of(const std::string& name) const { return find_dim(cells, name); }

std::optional<int> CellComplex::dual_dim_of(const std::string& name) const { return find_dim(duals(), name); }

std::vector<std::pair<std::string, std::int64_t>> CellComplex::boundary_of(const std::string& name) const {
    std::vector<std::pair<std::string, std::int64_t>> out;
    for (const auto& [key, coef] : boundary)
        if (key.first == name && coef != 0) out.emplace_back(key.second, coef);
    return out;
}

std::int64_t CellComplex::c(const std::string& cell, const std::string& dual) const {
    return lookup(diagonal, cell, dual);
}

std::vector<Violation> validate_complex(const CellComplex& C) {
    std::vector<Violation> out;
    check_names(C.cells, "primal", out);
    check_boundary(C.cells, C.boundary, "primal", out);
    if (!C.dual_is_primal()) {
        check_names(C.dual_cells, "dual", out);
        check_boundary(C.dual_cells, C.dual_boundary, "dual", out);
    }
    for (const auto& [key, coef] : C.diagonal) {
        auto dp = C.dim_of(key.first);
        auto dd = C.dual_dim_of(key.second);
        if (!dp || !dd) {
            out.push_back({"unknown_cell", key.first, key.second, coef, "diagonal names an unknown cell"});
            continue;
        }
        if (*dp + *dd != C.n)
            out.push_back({"diagonal_dim", key.first, key.second, coef, "diagonal entry dimensions do not sum to n"});
    }
    // Cycle identity: sum_b d(a,b) c(b,g) = - sum_b c(a,b) dv(g,b), where dv(g,b)
    // is the coefficient of b in the dual boundary of g.
    const auto& dbd = C.dual_bd();
    for (const auto& a : C.cells) {
        for (const auto& g : C.duals()) {
            std::int64_t lhs = 0, rhs = 0;
            for (const auto& [key, coef] : C.boundary)
                if (key.first == a.name) lhs += coef * C.c(key.second, g.name);
            for (const auto& [key, coef] : dbd)
                if (key.first == g.name) rhs -= C.c(a.name, key.second) * coef;
            if (lhs != rhs)
                out.push_back({"cycle_identity", a.name, g.name, lhs - rhs,
                               "cycle identity fails at (" + a.name + ", " + g.name + ")"});
        }
    }
    return out;
}

int euler_characteristic(const CellComplex& C) {
    int chi = 0;
    for (const auto& c : C.cells) chi += (c.dim % 2 == 0) ? 1 : -1;
    return chi;
}

ExtendedDiagonal::ExtendedDiagonal(const CellComplex& C,
                                   const std::vector<std::pair<std::string, std::string>>& si_pairs)
    : cells_(C.diagonal) {
    for (const auto& c : C.cells) cell_names_[c.name] = c.dim;
    for (const auto& c : C.duals()) cell_names_[c.name] = c.dim;
    for (const auto& [x, xb] : si_pairs) {
        if (x == xb) fail(ErrorCode::UnknownGenerator, "self-intersection '" + x + "' equals its conjugate");
        if (cell_names_.count(x) || cell_names_.count(xb))
            fail(ErrorCode::UnknownGenerator, "self-intersection name clashes with a cell: " + x + "/" + xb);
        conj_[x] = xb;
        conj_[xb] = x;
    }
}

bool ExtendedDiagonal::knows(const std::string& name) const {
    return cell_names_.count(name) > 0 || conj_.count(name) > 0;
}

std::int64_t ExtendedDiagonal::operator()(const std::string& a, const std::string& b) const {
    if (!knows(a)) fail(ErrorCode::UnknownGenerator, "unknown generator '" + a + "'");
    if (!knows(b)) fail(ErrorCode::UnknownGenerator, "unknown generator '" + b + "'");
    auto ia = conj_.find(a);
    auto ib = conj_.find(b);
    if (ia != conj_.end() || ib != conj_.end()) return (ia != conj_.end() && ia->second == b) ? 1 : 0;
    auto it = cells_.find({a, b});
    return it == cells_.end() ? 0 : it->second;
}

ExtendedDiagonal extend_diagonal(const CellComplex& C,
                                 const std::vector<std::pair<std::string, std::string>>& si_pairs) {
    return ExtendedDiagonal(C, si_pairs);
}

namespace {

// Degree of a homogeneous cochain; nullopt for the zero cochain.
std::optional<int> cochain_degree(const CellCochain& a, const std::vector<Cell>& cells, const char* which) {
    std::optional<int> deg;
    for (const auto& [name, val] : a) {
        if (val.is_zero()) continue;
        auto d = find_dim(cells, name);
        if (!d) fail(ErrorCode::UnknownGenerator, std::string(which) + " cochain names unknown cell '" + name + "'");
        if (deg && *deg != *d) fail(ErrorCode::DimensionMismatch, std::string(which) + " cochain is not homogeneous");
        deg = *d;
    }
    return deg;
}

} // namespace

CellCochain cup_product(const CellComplex& C, const CellCochain& a, const CellCochain& b) {
    auto da = cochain_degree(a, C.cells, "left");
    auto db = cochain_degree(b, C.duals(), "right");
    if (!da || !db) return {};
    if (*da + *db > C.n) return {};
    if (*da + *db < C.n)
        fail(ErrorCode::DimensionMismatch, "the diagonal class only determines the top-degree product");
    novikov::Element v;
    for (const auto& [key, coef] : C.diagonal) {
        auto ia = a.find(key.first);
        auto ib = b.find(key.second);
        if (ia == a.end() || ib == b.end()) continue;
        v += novikov::scale(ia->second * ib->second, static_cast<double>(coef));
    }
    CellCochain out;
    if (v.is_zero()) return out;
    for (const auto& c : C.cells)
        if (c.dim == C.n) {
            out[c.name] = v;
            break;
        }
    return out;
}

int check_standard_ball(const CellComplex& C, const StandardBall& ball) {
    auto dt = C.dim_of(ball.top);
    auto ds = C.dim_of(ball.sphere);
    auto dp = C.dim_of(ball.point);
    if (!dt || !ds || !dp) fail(ErrorCode::MissingBall, "standard ball cells missing: " + ball.top);
    if (*dt != C.n || *ds != C.n - 1 || *dp != 0)
        fail(ErrorCode::MissingBall, "standard ball '" + ball.top + "' has wrong cell dimensions");
    auto bd = C.boundary_of(ball.top);
    if (bd.size() != 1 || bd[0].first != ball.sphere || (bd[0].second != 1 && bd[0].second != -1))
        fail(ErrorCode::MissingBall, "boundary of '" + ball.top + "' is not +-" + ball.sphere);
    // The point must lie in the closure of the sphere cell when that cell has faces.
    std::set<std::string> closure{ball.sphere};
    std::vector<std::string> frontier{ball.sphere};
    while (!frontier.empty()) {
        std::string cur = frontier.back();
        frontier.pop_back();
        for (const auto& [face, coef] : C.boundary_of(cur))
            if (closure.insert(face).second) frontier.push_back(face);
    }
    if (closure.size() > 1 && !closure.count(ball.point))
        fail(ErrorCode::MissingBall, "point '" + ball.point + "' is not in the closure of '" + ball.sphere + "'");
    return static_cast<int>(bd[0].second);
}

CellComplex surger_cells(const CellComplex& C0, const StandardBall& plus, const StandardBall& minus,
                         const SurgerOptions& opts) {
    if (C0.n < 2) fail(ErrorCode::DimensionTooLow, "surgery on cells needs n >= 2");
    if (!C0.dual_is_primal()) fail(ErrorCode::InvalidInput, "cell surgery supports self-dual decompositions only");
    int sp = check_standard_ball(C0, plus);
    int sm = check_standard_ball(C0, minus);
    if (C0.dim_of(opts.sigma_1) || C0.dim_of(opts.sigma_n))
        fail(ErrorCode::InvalidInput, "handle cell names clash with existing cells");

    const std::set<std::string> removed{plus.top, minus.top};
    CellComplex out;
    out.n = C0.n;
    for (const auto& c : C0.cells)
        if (!removed.count(c.name)) out.cells.push_back(c);
    out.cells.push_back({opts.sigma_1, 1});
    out.cells.push_back({opts.sigma_n, C0.n});

    for (const auto& [key, coef] : C0.boundary)
        if (!removed.count(key.first) && !removed.count(key.second)) out.boundary[key] = coef;
    out.boundary[{opts.sigma_1, plus.point}] += opts.sigma_1_sign;
    out.boundary[{opts.sigma_1, minus.point}] -= opts.sigma_1_sign;
    out.boundary[{opts.sigma_n, plus.sphere}] += opts.sigma_n_sign;
    out.boundary[{opts.sigma_n, minus.sphere}] -= opts.sigma_n_sign;
    for (auto it = out.boundary.begin(); it != out.boundary.end();)
        it = it->second == 0 ? out.boundary.erase(it) : std::next(it);

    for (const auto& [key, coef] : C0.diagonal)
        if (!removed.count(key.first) && !removed.count(key.second)) out.diagonal[key] = coef;
    if (opts.handle_diagonal) {
        for (const auto& [key, coef] : *opts.handle_diagonal) out.diagonal[key] = coef;
    } else {
        out.diagonal[{minus.sphere, opts.sigma_1}] = 1;
        out.diagonal[{opts.sigma_1, plus.sphere}] = 1;
        out.diagonal[{plus.sphere, opts.sigma_1}] = 1;
        // sigma_n is homologous to s+ top+ - s- top-, so it inherits that combination.
        for (const auto& [key, coef] : C0.diagonal) {
            std::int64_t w = 0;
            if (key.first == plus.top) w = sp;
            if (key.first == minus.top) w = -sm;
            if (w != 0) out.diagonal[{opts.sigma_n, key.second}] += opts.sigma_n_sign * w * coef;
            w = 0;
            if (key.second == plus.top) w = sp;
            if (key.second == minus.top) w = -sm;
            if (w != 0) out.diagonal[{key.first, opts.sigma_n}] += opts.sigma_n_sign * w * coef;
        }
    }
    for (auto it = out.diagonal.begin(); it != out.diagonal.end();)
        it = it->second == 0 ? out.diagonal.erase(it) : std::next(it);
    return out;
}

namespace builders {

CellComplex circle(const std::string& point, const std::string& arc) {
    CellComplex C;
    C.n = 1;
    C.cells = {{point, 0}, {arc, 1}};
    C.diagonal[{point, arc}] = 1;
    C.diagonal[{arc, point}] = 1;
    return C;
}

CellComplex circle_two_vertices() {
    CellComplex C;
    C.n = 1;
    C.cells = {{"v0", 0}, {"v1", 0}, {"e0", 1}, {"e1", 1}};
    C.boundary[{"e0", "v1"}] = 1;
    C.boundary[{"e0", "v0"}] = -1;
    C.boundary[{"e1", "v0"}] = 1;
    C.boundary[{"e1", "v1"}] = -1;
    for (const char* v : {"v0", "v1"})
        for (const char* e : {"e0", "e1"}) {
            C.diagonal[{v, e}] = 1;
            C.diagonal[{e, v}] = 1;
        }
    return C;
}

CellComplex sphere_with_two_balls(int n) {
    if (n < 2) fail(ErrorCode::DimensionTooLow, "sphere_with_two_balls needs n >= 2");
    CellComplex C;
    C.n = n;
    C.cells = {{"pt+", 0},       {"pt-", 0},       {"arc", 1},       {"sph+", n - 1},
               {"sph-", n - 1},  {"ball+", n},     {"ball-", n},     {"rest", n}};
    C.boundary[{"arc", "pt-"}] = 1;
    C.boundary[{"arc", "pt+"}] = -1;
    C.boundary[{"ball+", "sph+"}] = 1;
    C.boundary[{"ball-", "sph-"}] = -1;
    C.boundary[{"rest", "sph+"}] = -1;
    C.boundary[{"rest", "sph-"}] = 1;
    C.diagonal[{"ball+", "pt+"}] = 1;
    C.diagonal[{"ball-", "pt-"}] = 1;
    C.diagonal[{"sph+", "arc"}] = 1;
    C.diagonal[{"sph-", "arc"}] = 1;
    C.diagonal[{"arc", "sph+"}] = -1;
    C.diagonal[{"pt-", "ball+"}] = 1;
    C.diagonal[{"pt+", "rest"}] = 1;
    return C;
}

StandardBall sphere_ball(bool plus) {
    return plus ? StandardBall{"ball+", "sph+", "pt+"} : StandardBall{"ball-", "sph-", "pt-"};
}

CellComplex disjoint_union(const CellComplex& a, const CellComplex& b) {
    if (a.n != b.n) fail(ErrorCode::DimensionMismatch, "disjoint union of complexes of different dimension");
    if (!a.dual_is_primal() || !b.dual_is_primal())
        fail(ErrorCode::InvalidInput, "disjoint union supports self-dual decompositions only");
    CellComplex out = a;
    for (const auto& c : b.cells) {
        if (out.dim_of(c.name)) fail(ErrorCode::InvalidInput, "cell name clash '" + c.name + "'");
        out.cells.push_back(c);
    }
    for (const auto& [k, v] : b.boundary) out.boundary[k] = v;
    for (const auto& [k, v] : b.diagonal) out.diagonal[k] = v;
    return out;
}

} // namespace builders

} // namespace lagsurg::cellular
