#pragma once

#include "lagsurg/ainfty.hpp"
#include "lagsurg/cellular.hpp"
#include "lagsurg/floer.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lagsurg::surgery {

using ainfty::Algebra;
using ainfty::Cochain;
using ainfty::Disk;
using floer::Matrix;
using novikov::Element;
using novikov::Ext;
using novikov::Rational;

struct SurgeryData {
    std::string x;
    std::string xbar;
    Rational A_eps{1, 2};
    cellular::StandardBall plus{"ball+", "sph+", "pt+"};
    cellular::StandardBall minus{"ball-", "sph-", "pt-"};
    std::string lambda = "handle_1";
    std::string sigma_n = "handle_n";
    // Use the sphere of the minus ball as the meridian.
    bool meridian_minus = false;
    int sigma_1_sign = 1;
    int sigma_n_sign = 1;
    int branch = 0;
    // DPsi(x) uses (b0(x) q^A)^{-1} on the meridian instead of b0(x)^{-1}.
    bool literal_dpsi = false;
    std::string longitude_label = "L";
    std::string meridian_label = "M";

    const std::string& mu() const { return meridian_minus ? minus.sphere : plus.sphere; }
};

struct Caps {
    int R = 12;           // meridian insertions per corner
    int S = 12;           // longitude insertions per corner (n = 2)
    double max_tail = 1e-3;
};

// Coefficients feeding the handle: c(mu) = log(b0(x) q^A), c(lambda), z = b0(x) b0(xbar).
struct HandleCoefficients {
    Element bx;
    Element bxbar;
    Element z;
    Element c_mu;
    Element c_lambda;
    Element unit; // b0(x) q^A
};

HandleCoefficients handle_coefficients(const Algebra& A0, const Cochain& b0, const SurgeryData& S);

Algebra surgered_shell(const Algebra& A0, const SurgeryData& S, std::vector<Disk> atlas,
                       std::map<std::string, Element> extra_local = {});
cellular::CellComplex surgered_complex(const Algebra& A0, const SurgeryData& S);
std::vector<std::string> surgered_basis(const Algebra& A0, const SurgeryData& S);

// b_eps = b0 - b0(x) x - b0(xbar) xbar + c(mu) mu + c(lambda) lambda.
Cochain psi(const Algebra& A0, const Cochain& b0, const SurgeryData& S, const Rational& delta);

enum class LocalMode { Lshift, Mshift };

struct LocalVariant {
    Cochain b;
    std::map<std::string, Element> local_system;
};

// Lshift: no meridian term, longitude holonomy b0(x) q^A.
// Mshift (n = 2): handle terms vanish, meridian holonomy z - 1; needs a one-chain kappa.
LocalVariant psi_local_system_variant(const Algebra& A0, const Cochain& b0, const SurgeryData& S,
                                      const Rational& delta, LocalMode mode, const Cochain* kappa = nullptr);

// Rows: surgered basis. Columns: basis of A0. Balls map to zero.
Matrix dpsi(const Algebra& A0, const Cochain& b0, const SurgeryData& S);
Cochain dpsi_apply(const Algebra& A0, const Cochain& b0, const SurgeryData& S, const std::string& sigma);

enum class Corner { XIn, XbarIn, XOut, XbarOutLambda, XbarOutMu };

enum class Expansion {
    Resummed, // meridian insertions carry the exponential of c(mu)
    Lshift,   // longitude holonomy replaces the meridian insertions
};

struct Family {
    std::size_t source = 0;       // index in the A0 atlas
    std::string output;           // surgered output label
    std::vector<Corner> corners;  // in word order, output corner last
    std::vector<std::string> plain_inputs;
    std::vector<std::size_t> members; // indices in the surgered atlas
    Rational area{0};
    // (-1)^heart(w0) * sign * sym * hol * q^area, without b-values or corner factors.
    Element base_weight;
};

struct TransformResult {
    Algebra algebra;
    std::vector<Family> families;
    Expansion expansion = Expansion::Resummed;
    std::optional<HandleCoefficients> coeffs;
};

// Transformed atlas on the surgered complex. With b0, tail bounds are checked against caps.max_tail.
TransformResult transform_atlas(const Algebra& A0, const SurgeryData& S, const std::optional<Cochain>& b0,
                                const Caps& caps = {}, Expansion mode = Expansion::Resummed);

// Annotation-driven transform for the dimension-one example; every disk touching x or xbar needs
// one of the keys drop, output, holonomy, area_shift, drop_x_inputs.
Algebra transform_annotated(const Algebra& A0, const SurgeryData& S, const cellular::CellComplex& target,
                            const std::map<std::string, Element>& local_system);
// b0 - b0(x) x - b0(xbar) xbar.
Cochain psi_annotated(const Algebra& A0, const Cochain& b0, const SurgeryData& S);

struct FamilyCheck {
    std::size_t family = 0;
    std::string output;
    Element path_a;
    Element path_b;
    double diff = 0;
    double tail = 0;          // rigorous majorant of the dropped terms
    double literal_bound = 0; // |c|^{R+1} / (R+1)!
    bool ok = false;
};

// Family sums in expanded form (surgered atlas) against the closed-form exponentials.
std::vector<FamilyCheck> resummation_check(const TransformResult& T, const Algebra& A0, const Cochain& b0,
                                           const SurgeryData& S, const Caps& caps, double tol = 1e-9);

struct CurveRow {
    std::string sigma;
    std::string form; // "dpsi", "meridian" or "longitude"
    Element lhs;
    Element rhs;
    double diff = 0;
    double tail = 0;
    bool pass = false;
};

struct ConstantCheck {
    int n = 0;
    Cochain removed;  // contribution of the A0 constant handle disks to m_0
    Cochain added;    // b_eps(lambda) times the classical boundary of lambda
    bool match = false;
    // n = 2 only: the rotation-invariant family sum -log(1 - z) against c(lambda) = log(z - 1).
    std::optional<Element> family_sum;
    std::optional<Element> c_lambda;
    std::optional<Element> discrepancy;
};

struct CurveReport {
    std::vector<CurveRow> rows;
    bool pass = true;
    ConstantCheck constant;
};

CurveReport verify_curve_identity(const Algebra& A0, const SurgeryData& S, const Cochain& b0, const Caps& caps = {},
                                  double tol = 1e-9, const Rational& delta = Rational(3, 5));
CurveReport verify_curve_identity(const Algebra& A0, const TransformResult& T, const SurgeryData& S,
                                  const Cochain& b0, const Caps& caps, double tol);

ConstantCheck constant_disk_check(const Algebra& A0, const Algebra& Aeps, const SurgeryData& S, const Cochain& b0,
                                  const Cochain& beps);

// K[sigma][tau] = derivative of the correlator with output sigma in the direction of tau.
Matrix correlator_jacobian(const Algebra& A, const Cochain& b, const std::vector<std::string>& outputs,
                           const std::vector<std::string>& inputs);

// Derivative of DPsi(sigma) paired with the surgered correlators; nonzero only in the x, xbar block.
Matrix dpsi_correction(const Algebra& A0, const Algebra& Aeps, const Cochain& b0, const Cochain& beps,
                       const SurgeryData& S, const std::vector<std::string>& generators);

} // namespace lagsurg::surgery
