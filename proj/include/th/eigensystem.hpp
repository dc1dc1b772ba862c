#pragma once

#include <functional>
#include <vector>

#include "th/locator.hpp"

namespace th {

// v theta^p e^{c theta}
struct ProfileTerm {
    CVec v;
    int p = 0;
    cd c = 0.0;
};

// Function on [-r, 0] kept as a term list so that boundary and interior relations are exact.
struct Profile {
    int m = 0;
    std::vector<ProfileTerm> terms;

    Profile() = default;
    explicit Profile(int m_) : m(m_) {}
    static Profile constant(const CVec& v);
    static Profile exponential(const CVec& v, cd c);

    CVec at(double theta) const;
    CVec derivative(double theta) const;
    LagTuple samples(const std::vector<double>& lags) const;
    Profile conj() const;
    Profile& add(const CVec& v, int p, cd c);
    Profile& add(const Profile& o, cd scale = 1.0);
    Profile scaled(cd s) const;
    void compress(double drop = 0.0);  // merge equal (p, c) terms
};

// psi(s) = psi0 e^{-lambda s}, s in [0, r]
struct AdjointProfile {
    CRow psi0;
    cd lambda;
};

// \int_{-r}^0 xi^p e^{a xi} d xi
cd J_integral(int p, cd a, double r);

// (psi, phi)_k = psi(0) phi(0) + sum_j \int_{-r_j}^0 psi(xi + r_j) A_j phi(xi) d xi
cd bilinear_form(const ModelSpec& s, int k, const AdjointProfile& psi, const Profile& phi);
cd bilinear_form_quadrature(const ModelSpec& s, int k, const AdjointProfile& psi,
                            const std::function<CVec(double)>& phi, int nodes = 64);

enum class Side { Left, Right };

struct KernelOptions {
    double small = 1e-8;  // relative to max(1, sigma_max)
    double gap = 1e-4;
};

// Left vectors are returned as the column of y with y^T M = 0.
CVec null_vector(const CMat& M, Side side, const KernelOptions& o = {});

struct EigenQuadruple {
    int k1 = 0, k2 = 0;
    double omega0 = 0;
    CVec phi1, phi2;
    CRow psi1, psi2;
    double kernel_residual = 0;  // max over the four null relations
    double normalization_residual = 0;

    Profile phi1_profile() const { return Profile::constant(phi1); }
    Profile phi2_profile() const { return Profile::exponential(phi2, cd(0, omega0)); }
    AdjointProfile psi1_adj() const { return {psi1, 0.0}; }
    AdjointProfile psi2_adj() const { return {psi2, cd(0, omega0)}; }
};

EigenQuadruple normalized_quadruple(const ModelSpec& s, int k1, int k2, double omega0, const KernelOptions& o = {});
EigenQuadruple normalized_quadruple(const ModelSpec& s, const CriticalPoint& cp, const KernelOptions& o = {});

struct EtaIntegrals {
    int k = 0;
    CMat int_deta;        // -mu_k D0 + sum A_j
    CMat int_theta_deta;  // -sum r_j A_j
    std::function<CMat(cd)> exp_weighted;  // -mu_k D0 + sum A_j e^{-c r_j}
};

EtaIntegrals eta_integrals(const ModelSpec& s, int k, ParameterPoint alpha = {});

// \int d eta_k(theta) phi(theta)
CVec apply_eta(const ModelSpec& s, int k, const Profile& phi);

} // namespace th
