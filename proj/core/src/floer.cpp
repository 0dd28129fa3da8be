#include "lagsurg/floer.hpp"

#include "lagsurg/errors.hpp"

#include <map>

namespace lagsurg::floer {

Matrix::Matrix(std::vector<std::string> r, std::vector<std::string> c)
    : rows(std::move(r)), cols(std::move(c)), a(rows.size(), std::vector<Element>(cols.size())) {}

bool Matrix::is_zero() const {
    for (const auto& row : a)
        for (const auto& e : row)
            if (!e.is_zero()) return false;
    return true;
}

Matrix multiply(const Matrix& x, const Matrix& y) {
    if (x.cols != y.rows) fail(ErrorCode::DimensionMismatch, "matrix product with mismatched indices");
    Matrix out(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows.size(); ++i)
        for (std::size_t k = 0; k < x.cols.size(); ++k) {
            if (x.a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < y.cols.size(); ++j)
                if (!y.a[k][j].is_zero()) out.a[i][j] += x.a[i][k] * y.a[k][j];
        }
    return out;
}

Matrix transpose(const Matrix& x) {
    Matrix out(x.cols, x.rows);
    for (std::size_t i = 0; i < x.rows.size(); ++i)
        for (std::size_t j = 0; j < x.cols.size(); ++j) out.a[j][i] = x.a[i][j];
    return out;
}

Matrix subtract(const Matrix& x, const Matrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) fail(ErrorCode::DimensionMismatch, "matrix difference shape");
    Matrix out = x;
    for (std::size_t i = 0; i < x.rows.size(); ++i)
        for (std::size_t j = 0; j < x.cols.size(); ++j) out.a[i][j] -= y.a[i][j];
    return out;
}

Matrix matrix_of(const std::vector<std::string>& basis, const std::function<Cochain(const std::string&)>& f) {
    Matrix out(basis, basis);
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < basis.size(); ++i) idx[basis[i]] = i;
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const Cochain img = f(basis[j]);
        for (const auto& [g, v] : img.coeffs()) {
            auto it = idx.find(g);
            if (it == idx.end()) fail(ErrorCode::UnknownGenerator, "image names '" + g + "' outside the basis");
            out.a[it->second][j] = v;
        }
    }
    return out;
}

Matrix floer_differential(const Algebra& A, const Cochain& b, bool check_flat) {
    if (check_flat) {
        Cochain res = ainfty::m_deformed(A, b, {});
        res.erase(A.unit_white());
        if (!res.is_zero())
            fail(ErrorCode::NotProjectivelyFlat, "m_0^b is not a multiple of the strict unit: " + ainfty::to_string(res));
    }
    std::vector<std::string> basis;
    for (const auto& g : A.basis()) basis.push_back(g.name);
    return matrix_of(basis, [&](const std::string& g) { return ainfty::m_deformed(A, b, {g}); });
}

namespace {

std::optional<Rational> cap_of(const Element& e) {
    if (e.trunc().is_inf()) return std::nullopt;
    return e.trunc().value();
}

} // namespace

RankCertificate rank(const Matrix& M, const Rational& safety_gap) {
    Matrix W = M;
    const std::size_t R = W.rows.size(), C = W.cols.size();
    std::vector<bool> row_live(R, true), col_live(C, true);
    RankCertificate cert;
    cert.safety_gap = safety_gap;
    for (;;) {
        bool found = false;
        std::size_t pr = 0, pc = 0;
        Ext best = Ext::infinity();
        for (std::size_t j = 0; j < C; ++j) {
            if (!col_live[j]) continue;
            for (std::size_t i = 0; i < R; ++i) {
                if (!row_live[i] || W.a[i][j].is_zero()) continue;
                Ext v = novikov::val_q(W.a[i][j]);
                if (!found || v < best) {
                    found = true;
                    best = v;
                    pr = i;
                    pc = j;
                }
            }
        }
        if (!found) break;
        cert.pivots.push_back({pr, pc, best.value()});
        Element inv = novikov::invert(W.a[pr][pc], cap_of(W.a[pr][pc]));
        for (std::size_t i = 0; i < R; ++i) {
            if (i == pr || !row_live[i] || W.a[i][pc].is_zero()) continue;
            Element f = W.a[i][pc] * inv;
            for (std::size_t j = 0; j < C; ++j)
                if (col_live[j] && !W.a[pr][j].is_zero()) W.a[i][j] -= f * W.a[pr][j];
            W.a[i][pc] = Element();
        }
        row_live[pr] = false;
        col_live[pc] = false;
    }
    cert.rank = cert.pivots.size();
    Ext min_trunc = Ext::infinity();
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < C; ++j)
            if (row_live[i] && col_live[j]) min_trunc = novikov::min(min_trunc, W.a[i][j].trunc());
    Rational max_pivot{0};
    bool any = false;
    for (const auto& p : cert.pivots)
        if (!any || p.val > max_pivot) {
            max_pivot = p.val;
            any = true;
        }
    cert.margin = min_trunc.is_inf() ? Ext::infinity() : Ext(min_trunc.value() - max_pivot);
    if (!cert.margin.is_inf() && cert.margin <= Ext(0))
        fail(ErrorCode::RankUnstable, "a pivot decision depends on terms at the truncation boundary");
    cert.below_safety = !cert.margin.is_inf() && cert.margin < Ext(safety_gap);
    return cert;
}

HFReport hf_dimension_of(const Matrix& D, const Rational& safety_gap) {
    if (D.rows != D.cols) fail(ErrorCode::DimensionMismatch, "differential must be square");
    if (!multiply(D, D).is_zero()) fail(ErrorCode::SquareNotZero, "the differential does not square to zero");
    HFReport r;
    r.generators = D.rows.size();
    r.cert = rank(D, safety_gap);
    r.dim = r.generators - 2 * r.cert.rank;
    return r;
}

HFReport hf_dimension(const Algebra& A, const Cochain& b, const Rational& safety_gap) {
    return hf_dimension_of(floer_differential(A, b), safety_gap);
}

namespace {

using Vec = std::vector<Element>;

struct Echelon {
    std::vector<Vec> vecs;
    std::vector<std::size_t> pivots;

    void reduce(Vec& v) const {
        for (std::size_t k = 0; k < vecs.size(); ++k) {
            Element c = v[pivots[k]];
            if (c.is_zero()) continue;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (!vecs[k][i].is_zero()) v[i] -= c * vecs[k][i];
            v[pivots[k]] = Element();
        }
    }
};

bool vec_zero(const Vec& v) {
    for (const auto& e : v)
        if (!e.is_zero()) return false;
    return true;
}

Vec image_of(const Matrix& D, const Vec& v) {
    Vec out(D.rows.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j].is_zero()) continue;
        for (std::size_t i = 0; i < D.rows.size(); ++i)
            if (!D.a[i][j].is_zero()) out[i] += D.a[i][j] * v[j];
    }
    return out;
}

} // namespace

Quotient ess_quotient(const Matrix& D, const std::vector<Cochain>& loc, const Rational& safety_gap) {
    if (D.rows != D.cols) fail(ErrorCode::DimensionMismatch, "differential must be square");
    const auto& basis = D.rows;
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < basis.size(); ++i) idx[basis[i]] = i;

    Echelon E;
    for (const auto& c : loc) {
        Vec v(basis.size());
        for (const auto& [g, e] : c.coeffs()) {
            auto it = idx.find(g);
            if (it == idx.end()) fail(ErrorCode::UnknownGenerator, "local span names unknown generator '" + g + "'");
            v[it->second] = e;
        }
        E.reduce(v);
        if (vec_zero(v)) fail(ErrorCode::InvalidInput, "local span vectors are linearly dependent");
        std::size_t p = 0;
        bool found = false;
        Ext best = Ext::infinity();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i].is_zero()) continue;
            Ext val = novikov::val_q(v[i]);
            if (!found || val < best) {
                found = true;
                best = val;
                p = i;
            }
        }
        Element inv = novikov::invert(v[p], cap_of(v[p]));
        for (auto& e : v) e = e * inv;
        v[p] = Element(1.0);
        for (auto& w : E.vecs) {
            Element c2 = w[p];
            if (c2.is_zero()) continue;
            for (std::size_t i = 0; i < w.size(); ++i)
                if (!v[i].is_zero()) w[i] -= c2 * v[i];
            w[p] = Element();
        }
        E.vecs.push_back(std::move(v));
        E.pivots.push_back(p);
    }

    const std::size_t L = E.vecs.size();
    Matrix local{std::vector<std::string>(L), std::vector<std::string>(L)};
    for (std::size_t k = 0; k < L; ++k) {
        local.rows[k] = local.cols[k] = basis[E.pivots[k]];
        Vec w = image_of(D, E.vecs[k]);
        for (std::size_t j = 0; j < L; ++j) local.a[j][k] = w[E.pivots[j]];
        E.reduce(w);
        if (!vec_zero(w))
            fail(ErrorCode::NotSubcomplex, "the local span is not closed under the differential");
    }
    auto lr = rank(local, safety_gap);
    if (L != 2 * lr.rank) fail(ErrorCode::NotAcyclic, "the local subcomplex has nonzero cohomology");

    Quotient Q;
    std::vector<bool> is_pivot(basis.size(), false);
    for (auto p : E.pivots) is_pivot[p] = true;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (is_pivot[i])
            Q.eliminated.push_back(basis[i]);
        else {
            keep.push_back(i);
            Q.basis.push_back(basis[i]);
        }
    }
    Q.differential = Matrix(Q.basis, Q.basis);
    for (std::size_t jj = 0; jj < keep.size(); ++jj) {
        Vec col(basis.size());
        for (std::size_t i = 0; i < basis.size(); ++i) col[i] = D.a[i][keep[jj]];
        E.reduce(col);
        for (std::size_t ii = 0; ii < keep.size(); ++ii) Q.differential.a[ii][jj] = col[keep[ii]];
    }
    Q.hf = hf_dimension_of(Q.differential, safety_gap);
    return Q;
}

Quotient ess_quotient(const Algebra& A, const Cochain& b, const std::vector<Cochain>& loc, const Rational& safety_gap) {
    return ess_quotient(floer_differential(A, b), loc, safety_gap);
}

} // namespace lagsurg::floer
