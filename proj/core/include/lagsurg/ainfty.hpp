#pragma once

#include "lagsurg/cellular.hpp"
#include "lagsurg/novikov.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace lagsurg::ainfty {

using novikov::Element;
using novikov::Ext;
using novikov::Rational;

enum class GenKind { Cell, SelfIntersection, UnitWhite, UnitGrey };

struct Generator {
    std::string name;
    GenKind kind = GenKind::Cell;
    int dim = 0;              // cells only
    std::string conjugate;    // self-intersection points only
    int parity = 0;
};

// Exact rational disk weight; factorial weights outgrow 64 bits.
using Weight = boost::multiprecision::cpp_rational;

// Formal product of loop labels with integer exponents.
using HolonomyWord = std::vector<std::pair<std::string, int>>;

struct Disk {
    std::vector<std::string> inputs;
    std::string output;
    Rational area{0};
    int sign = 1;
    // Positive rational weight (symmetry divisor, branched-perturbation weight, 1/r!).
    Weight sym{1};
    HolonomyWord holonomy;
    bool constant_on_handle = false;
    std::map<std::string, std::string> annotations;
};

class Cochain {
  public:
    using Map = std::map<std::string, Element>;

    Cochain() = default;
    explicit Cochain(Map m);
    static Cochain single(const std::string& name, const Element& coef = Element(1.0));

    const Map& coeffs() const { return c_; }
    Element get(const std::string& name) const;
    void add(const std::string& name, const Element& v);
    void set(const std::string& name, const Element& v);
    void erase(const std::string& name) { c_.erase(name); }
    bool is_zero() const { return c_.empty(); }
    std::size_t size() const { return c_.size(); }

    Cochain& operator+=(const Cochain& o);
    Cochain& operator-=(const Cochain& o);
    friend Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
    friend Cochain operator-(Cochain a, const Cochain& b) { return a -= b; }
    Cochain scaled(const Element& s) const;
    Cochain truncated(const Ext& t) const;

  private:
    Map c_;
};

std::string to_string(const Cochain& c);

struct AlgebraOptions {
    // m_2(a, 1w) = (-1)^{|a|} a when true, a when false.
    bool koszul_units = true;
    // m_1(sigma) includes the cellular boundary of sigma.
    bool classical_boundary = true;
    // m_1(1g) = 1w - 1black.
    bool classical_grey = true;
    Ext trunc{Rational(6)};
    Rational delta_gap{1};
};

// Curved A-infinity algebra assembled from a cell complex, self-intersection
// generators, a disk atlas and a local system.
class Algebra {
  public:
    Algebra() = default;
    Algebra(cellular::CellComplex complex, std::vector<Generator> si_generators, std::vector<Disk> atlas,
            std::map<std::string, Element> local_system, AlgebraOptions options = {},
            std::string unit_white = "1w", std::string unit_grey = "1g");

    const cellular::CellComplex& complex() const { return complex_; }
    const std::vector<Generator>& basis() const { return basis_; }
    const std::vector<Disk>& atlas() const { return atlas_; }
    const std::map<std::string, Element>& local_system() const { return local_system_; }
    const AlgebraOptions& options() const { return opts_; }
    AlgebraOptions& options() { return opts_; }
    const cellular::ExtendedDiagonal& diagonal() const { return diag_; }
    int n() const { return complex_.n; }
    const std::string& unit_white() const { return white_; }
    const std::string& unit_grey() const { return grey_; }

    bool has(const std::string& name) const { return index_.count(name) > 0; }
    const Generator& gen(const std::string& name) const;
    int parity(const std::string& name) const { return gen(name).parity; }
    bool is_si(const std::string& name) const { return gen(name).kind == GenKind::SelfIntersection; }
    std::vector<Generator> si_generators() const;

    // Local-system evaluation of a holonomy word.
    Element holonomy(const HolonomyWord& w) const;
    // Signed weight (-1)^heart * sym * hol * q^area * sign of one disk.
    Element disk_weight(const Disk& d) const;
    // Sum over gamma of c(output, gamma) gamma.
    Cochain emit(const std::string& output, const Element& coef) const;

  private:
    cellular::CellComplex complex_;
    std::vector<Generator> basis_;
    std::vector<Disk> atlas_;
    std::map<std::string, Element> local_system_;
    AlgebraOptions opts_;
    std::string white_, grey_;
    std::unordered_map<std::string, std::size_t> index_;
    cellular::ExtendedDiagonal diag_;
    std::map<std::string, std::vector<std::pair<std::string, std::int64_t>>> emit_cache_;
};

int heartsuit_sign(const std::vector<int>& parities);
int heartsuit_sign(const Algebra& A, const std::vector<std::string>& word);

// Composition map on a word of generators.
Cochain m(const Algebra& A, const std::vector<std::string>& inputs);

// Unit and classical rules only (no atlas disks).
Cochain m_rules(const Algebra& A, const std::vector<std::string>& inputs);

// m_d^{b_0,...,b_d}(args): sum over all insertion patterns.
Cochain m_multi(const Algebra& A, const std::vector<Cochain>& bs, const std::vector<std::string>& args);

// Multilinear extension of m_multi to cochain arguments.
Cochain m_multi_linear(const Algebra& A, const std::vector<Cochain>& bs, const std::vector<Cochain>& args);

// Deformed map m_d^b(args) = m_multi with every b_i = b.
Cochain m_deformed(const Algebra& A, const Cochain& b, const std::vector<std::string>& args);

// Correlator sum over atlas disks with output label sigma and inputs drawn from b.
Element correlator(const Algebra& A, const std::string& sigma, const Cochain& b, bool skip_constant = true);

using CompositionFn = std::function<Cochain(const std::vector<std::string>&)>;

// Left side of the A-infinity relation on a word, for an arbitrary family of maps.
Cochain ainfty_residual(const Algebra& A, const CompositionFn& mfn, const std::vector<std::string>& inputs);
Cochain ainfty_residual(const Algebra& A, const std::vector<std::string>& inputs);

struct SignCongruence {
    int computed = 0;
    int target = 0;
    bool ok() const { return computed == target; }
};

// Mod-2 gluing sign versus the target sum_k (k+1)|sigma_k|.
SignCongruence gluing_sign(int d, int n, int m, const std::vector<int>& degrees);
bool verify_gluing_sign_congruence(int d, int n, int m, const std::vector<int>& degrees);

Cochain geometric_unit(const Algebra& A);

bool is_odd(const Algebra& A, const Cochain& c);

struct AtlasViolation {
    std::size_t disk = 0;
    std::string kind; // "curvature_gap" or "corner_gap"
    std::string message;
};

// Input-free disks need positive area; a disk with s self-intersection corners needs area >= s * delta_gap
// unless it is constant on the handle.
std::vector<AtlasViolation> validate_atlas(const Algebra& A);

} // namespace lagsurg::ainfty
