#pragma once

#include <map>
#include <string>
#include <vector>

#include "th/eigensystem.hpp"

namespace th {

// ---- cosine basis on (0, l pi): beta_0 = 1, beta_n = sqrt(2) cos(n x / l)

using CosExpansion = std::map<int, double>;  // mode -> coefficient

CosExpansion beta_product(int a, int b);
CosExpansion beta_product(const CosExpansion& x, int b);
double bracket2(int a, int b, int k);          // <beta_a beta_b, beta_k>
double bracket3(int a, int b, int c, int k);   // <beta_a beta_b beta_c, beta_k>

struct InnerProductTable {
    double k1sq_k1 = 0;     // <b_k1^2, b_k1>
    double k2sq_k1 = 0;     // <b_k2^2, b_k1>
    double k1k2_k2 = 0;     // <b_k1 b_k2, b_k2>
    double k1sq_k2 = 0;     // <b_k1^2, b_k2>
    double k2sq_k2 = 0;     // <b_k2^2, b_k2>
    double k1k2_k1 = 0;     // <b_k1 b_k2, b_k1>
    double k1cu_k1 = 0;     // <b_k1^3, b_k1>
    double k2cu_k2 = 0;     // <b_k2^3, b_k2>
    double k1k2sq_k1 = 0;   // <b_k1 b_k2^2, b_k1>
    double k1sqk2_k2 = 0;   // <b_k1^2 b_k2, b_k2>
};

int case_of(int k1, int k2);  // 1..5
InnerProductTable inner_product_table(int k1, int k2, double l = 1.0);        // case tables
InnerProductTable exact_inner_product_table(int k1, int k2);                  // from beta_product

// ---- h_q records

struct HRecord {
    std::string q;  // 200 011 020 002 110 101
    int mode = 0;
    cd c = 0.0;     // h' - c h = forcing
    Profile profile;
    CVec E;         // coefficient of e^{c theta} fixed by the boundary relation
    bool projected = false;  // E pinned by (psi_i, h) = 0 on a singular solve
    double boundary_residual = 0;
    double interior_residual = 0;
};

struct HSet {
    std::vector<HRecord> records;
    const HRecord* find(const std::string& q, int mode) const;
    Profile get(const std::string& q, int mode, int m) const;  // zero profile if absent
    std::vector<int> modes(const std::string& q) const;
};

struct HEquation {
    cd c;
    Profile forcing;  // interior right-hand side
    CVec boundary;    // \int d eta_k h - c h(0) = boundary
};

HEquation h_equation(const ModelSpec& s, const EigenQuadruple& e, const std::string& q, int mode);
void h_residuals(const ModelSpec& s, const EigenQuadruple& e, HRecord& r);

// Solves Delta_k(c) E = rhs.  On a singular matrix at a centre eigenvalue of mode k the
// kernel component is fixed by (psi_i, p + E e^{c theta})_k = 0; otherwise ResonantSolve.
CVec solve_E(const ModelSpec& s, const EigenQuadruple& e, int k, cd c, const CVec& rhs, const Profile& p,
             bool* projected = nullptr);

// General path: every (q, mode) from the cosine expansion, conjugates appended.
HSet compute_h(const ModelSpec& s, const EigenQuadruple& e);
// Closed case formulas for the five (k1, k2) cases.
HSet compute_h_cases(const ModelSpec& s, const EigenQuadruple& e);

// ---- coefficients

struct Coefficients {
    cd a11, a23, b12, a111, a123, b112, b223;
};

struct NormalForm {
    int k1 = 0, k2 = 0;
    int case_id = 0;
    std::string proposition;
    double omega0 = 0;
    std::array<double, 2> a1{};  // a1(alpha) = a1[0] alpha1 + a1[1] alpha2
    std::array<cd, 2> b2{};
    Coefficients coef;           // general path (reported)
    Coefficients coef_cases;     // case-formula path
    double dual_path_discrepancy = 0;
    HSet h;
    double max_boundary_residual = 0, max_interior_residual = 0;
};

void linear_coefficients(const ModelSpec& s, const EigenQuadruple& e, std::array<double, 2>& a1,
                         std::array<cd, 2>& b2);

Coefficients general_coefficients(const ModelSpec& s, const EigenQuadruple& e, const HSet& h);
Coefficients case_coefficients(const ModelSpec& s, const EigenQuadruple& e, const HSet& h);
double coefficient_discrepancy(const Coefficients& x, const Coefficients& y);

NormalForm compute_normal_form(const ModelSpec& s, const EigenQuadruple& e);

} // namespace th
