#pragma once

#include "lagsurg/ainfty.hpp"

#include <string>
#include <vector>

namespace lagsurg::floer {

using ainfty::Algebra;
using ainfty::Cochain;
using novikov::Element;
using novikov::Ext;
using novikov::Rational;

// Dense matrix over the Novikov field; column j is the image of cols[j].
struct Matrix {
    std::vector<std::string> rows;
    std::vector<std::string> cols;
    std::vector<std::vector<Element>> a; // a[row][col]

    Matrix() = default;
    Matrix(std::vector<std::string> r, std::vector<std::string> c);
    const Element& at(std::size_t i, std::size_t j) const { return a[i][j]; }
    Element& at(std::size_t i, std::size_t j) { return a[i][j]; }
    bool is_zero() const;
};

Matrix multiply(const Matrix& x, const Matrix& y);
Matrix transpose(const Matrix& x);
Matrix subtract(const Matrix& x, const Matrix& y);

// Matrix of a linear map given on basis names.
Matrix matrix_of(const std::vector<std::string>& basis, const std::function<Cochain(const std::string&)>& f);

// Matrix of m_1^b on the algebra basis. Requires b projectively flat unless check_flat is false.
Matrix floer_differential(const Algebra& A, const Cochain& b, bool check_flat = true);

struct Pivot {
    std::size_t row = 0;
    std::size_t col = 0;
    Rational val{0};
};

struct RankCertificate {
    std::size_t rank = 0;
    std::vector<Pivot> pivots;
    // Smallest truncation among the remaining zero entries minus the largest pivot valuation.
    Ext margin = Ext::infinity();
    Rational safety_gap{1, 2};
    bool below_safety = false;
};

// Gaussian elimination with minimal-valuation pivots (ties: smallest column, then row).
RankCertificate rank(const Matrix& M, const Rational& safety_gap = Rational(1, 2));

struct HFReport {
    std::size_t dim = 0;
    std::size_t generators = 0;
    RankCertificate cert;
};

HFReport hf_dimension_of(const Matrix& D, const Rational& safety_gap = Rational(1, 2));
HFReport hf_dimension(const Algebra& A, const Cochain& b, const Rational& safety_gap = Rational(1, 2));

struct Quotient {
    std::vector<std::string> basis;      // complementary generators
    std::vector<std::string> eliminated; // pivot generators of the local span
    Matrix differential;
    HFReport hf;
};

// Quotient of the complex (basis, D) by the span of loc; checks closure and acyclicity.
Quotient ess_quotient(const Matrix& D, const std::vector<Cochain>& loc, const Rational& safety_gap = Rational(1, 2));
Quotient ess_quotient(const Algebra& A, const Cochain& b, const std::vector<Cochain>& loc,
                      const Rational& safety_gap = Rational(1, 2));

} // namespace lagsurg::floer
