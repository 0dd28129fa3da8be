#pragma once

#include "lagsurg/ainfty.hpp"
#include "lagsurg/cellular.hpp"

#include <map>
#include <string>
#include <vector>

namespace lagsurg::cone {

using ainfty::Algebra;
using ainfty::Cochain;
using ainfty::Disk;
using novikov::Element;
using novikov::Rational;

enum class Sector { Minus, Plus, MP, PM };

Sector parse_sector(const std::string& s);
std::string sector_name(Sector s);

struct BimoduleAtlas {
    cellular::CellComplex minus;
    cellular::CellComplex plus;
    // Intersection generators with their bimodule parity; conjugate pairs are mp <-> pm.
    std::vector<ainfty::Generator> mixed;
    std::map<std::string, Sector> sector;
    std::vector<Disk> disks;
    std::map<std::string, Element> local_system;
    ainfty::AlgebraOptions options;
};

// Sector of any generator of the union; units are diagonal in both blocks.
Sector sector_of(const BimoduleAtlas& B, const std::string& name);

// Checks that every disk word is composable and its output lands in the right sector.
void check_sectors(const BimoduleAtlas& B);

// Algebra of L_- and L_+ with the mixed generators shifted by one.
Algebra union_algebra(const BimoduleAtlas& B);

struct Cone {
    Algebra algebra;
    Cochain b_total; // b_- + b + b_+
};

Cone cone(const BimoduleAtlas& B, const Cochain& b, const Cochain& b_minus = {}, const Cochain& b_plus = {},
          const Rational& delta = Rational(1, 2));

// m_d of Cone(b) on a word.
Cochain cone_m(const Cone& C, const std::vector<std::string>& word);

struct ConeComparison {
    double discrepancy = 0;
    std::size_t words = 0;
    std::vector<std::string> worst_word;
    Algebra surgered;
};

// Surgered algebra at x in the longitude-holonomy form (holonomy b(x) q^A, areas shifted by
// kappa A) against Cone(b) on all words up to max_len avoiding x and xbar.
ConeComparison compare_cone_surgery(const BimoduleAtlas& B, const std::string& x, const Rational& A_eps,
                                    const Cochain& b, const Cochain& b_minus = {}, const Cochain& b_plus = {},
                                    std::size_t max_len = 3);

} // namespace lagsurg::cone
